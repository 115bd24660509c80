import sys

from superapp.apps.qaoa_limits.cli import main

sys.exit(main())
