from django.apps import AppConfig


class ResultantConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'resultant'
