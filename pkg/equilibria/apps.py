from django.apps import AppConfig


class EquilibriaConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "equilibria"
    verbose_name = "거리 기반 균형 분석"
