"""
Django settings for config project.

Generated by 'django-admin startproject' using Django 5.2.7.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""
import os
import environ
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.

BASE_DIR = Path(__file__).resolve().parent.parent
# 1. django-environ 초기 설정
env = environ.Env(
    DEBUG=(bool, False),
    DBEQ_PROGRESS=(bool, False),
)

# 2. .env 파일 읽어오기 (BASE_DIR에 있는 .env 파일을 읽음)
environ.Env.read_env(os.path.join(BASE_DIR, '.env'))

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = env('SECRET_KEY', default='django-insecure-dbeq-local-analysis-key')

DEBUG = env('DEBUG')

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
    "equilibria",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

# 저장된 분석 실행 기록을 관리자 페이지에서만 조회합니다.
ROOT_URLCONF = "config.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = "ko-kr"

TIME_ZONE = "Asia/Seoul"

USE_I18N = True

USE_TZ = True


STATIC_URL = "static/"

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# 3. 해법 수치 설정 (SolverSettings.from_settings()가 읽음)
DBEQ_TOL = float(env('DBEQ_TOL', default='1e-9'))  # 정확(꼭짓점/LP) 경로 판정 허용 오차
DBEQ_ITER_TOL = float(env('DBEQ_ITER_TOL', default='1e-6'))  # L2 반복 경로 판정 허용 오차
DBEQ_MAX_ITER = int(env('DBEQ_MAX_ITER', default='500'))  # 사영/절단평면/조건부 경사 반복 상한
DBEQ_DEFAULT_METRIC = env('DBEQ_DEFAULT_METRIC', default='l2')  # l2 | l1 | linf

# 4. 분석 작업 설정
DBEQ_THREADS = int(env('DBEQ_THREADS', default='4'))  # 열거/격자/감사 작업 스레드 수 상한
DBEQ_SAMPLES = int(env('DBEQ_SAMPLES', default='1000'))  # δ_G 표본 중심 수
DBEQ_ORACLE_MAX_CELLS = int(env('DBEQ_ORACLE_MAX_CELLS', default='30000000'))  # 오라클 격자 크기 상한
DBEQ_PROGRESS = env('DBEQ_PROGRESS')  # 긴 반복에서 tqdm 진행률 표시
DBEQ_STALE_MINUTES = int(env('DBEQ_STALE_MINUTES', default='30'))  # 진행 기록 없이 처리 중으로 둘 최대 시간(분)

# 5. 로깅 설정
DBEQ_LOG_LEVEL = env('DBEQ_LOG_LEVEL', default='WARNING')
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '[{levelname}] {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'equilibria': {
            'handlers': ['console'],
            'level': DBEQ_LOG_LEVEL,
            'propagate': False,
        },
    },
}

# 6. Celery 설정 (비동기 감사 작업용)
CELERY_BROKER_URL = env('CELERY_BROKER_URL', default='redis://localhost:6379/0')
CELERY_RESULT_BACKEND = env('CELERY_RESULT_BACKEND', default='redis://localhost:6379/0')

# Celery 작업 안정성 설정
# task_acks_late=True: 작업이 완료된 후에만 메시지를 확인 처리 (작업 손실 방지)
# task_reject_on_worker_lost=True: 워커가 중단되면 작업을 다시 큐에 반환
CELERY_TASK_ACKS_LATE = True
CELERY_TASK_REJECT_ON_WORKER_LOST = True
