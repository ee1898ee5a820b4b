from django.apps import AppConfig


class HypertreesConfig(AppConfig):
    name = "hypertrees"
