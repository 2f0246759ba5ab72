from django.apps import AppConfig


class FlexConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'flex'

    def ready(self):
        """
        Import signals when the app is ready.
        """
        import flex.signals  # noqa: F401
