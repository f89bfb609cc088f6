# 워커와 관리 명령이 같은 Celery 앱을 쓰도록 Django 시작 시 로드합니다.
from .celery import app as celery_app

__all__ = ('celery_app',)
