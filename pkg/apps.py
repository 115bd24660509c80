from django.apps import AppConfig


class QaoaLimitsConfig(AppConfig):
    name = 'superapp.apps.qaoa_limits'
    label = 'qaoa_limits'
    verbose_name = 'QAOA Infinite-Size Limits'

    def ready(self):
        # Raises ImproperlyConfigured on a malformed QAOA_LIMITS block
        from .settings import qaoa_settings
        qaoa_settings()
