default_app_config = 'superapp.apps.qaoa_limits.apps.QaoaLimitsConfig'
