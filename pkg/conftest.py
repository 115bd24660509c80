"""
Test bootstrap: make this checkout importable as superapp.apps.qaoa_limits
when it is not mounted inside a SuperApp project, then configure Django
with the app installed.
"""
import importlib
import importlib.util
import sys
import types
from pathlib import Path

import django
from django.conf import settings

ROOT = Path(__file__).resolve().parent
APP_MODULE = 'superapp.apps.qaoa_limits'


def _register_app_package():
    try:
        importlib.import_module(APP_MODULE)
        return
    except ImportError:
        pass
    for name in ('superapp', 'superapp.apps'):
        if name not in sys.modules:
            namespace = types.ModuleType(name)
            namespace.__path__ = []
            sys.modules[name] = namespace
    spec = importlib.util.spec_from_file_location(
        APP_MODULE, ROOT / '__init__.py', submodule_search_locations=[str(ROOT)]
    )
    module = importlib.util.module_from_spec(spec)
    sys.modules[APP_MODULE] = module
    spec.loader.exec_module(module)
    sys.modules['superapp'].apps = sys.modules['superapp.apps']
    sys.modules['superapp.apps'].qaoa_limits = module


def pytest_configure(config):
    _register_app_package()
    from superapp.apps.qaoa_limits.settings import extend_superapp_settings

    if not settings.configured:
        main_settings = {'INSTALLED_APPS': [], 'USE_TZ': True}
        extend_superapp_settings(main_settings)
        settings.configure(**main_settings)
    django.setup()
