"""
Django settings for the flexlocus project.
"""

from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Management commands only; nothing is served.
SECRET_KEY = config('SECRET_KEY', default='flexlocus-batch-only-no-http-surface')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

# Application definition
DJANGO_APPS = []

THIRD_PARTY_APPS = [
    'rest_framework',
]

LOCAL_APPS = [
    'utils',
    'polycore',
    'resultant',
    'flex',
    'oracle',
    'cli',
]

INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS

# No ORM state: every computation is a pure function of its inputs.
DATABASES = {}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Django REST Framework (serializers only, used for JSON certificates)
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'UNAUTHENTICATED_USER': None,
}

# Flex toolkit tunables
FLEXLOCUS = {
    'DEFAULT_SEED': config('FLEXLOCUS_SEED', default=20240601, cast=int),
    'DEFAULT_FIELD': config('FLEXLOCUS_FIELD', default='q'),
    'SQUAREFREE_LINES': config('FLEXLOCUS_SQUAREFREE_LINES', default=20, cast=int),
    'TAYLOR_SPOT_CHECKS': config('FLEXLOCUS_TAYLOR_SPOT_CHECKS', default=3, cast=int),
    'MINOR_RETRIES': config('FLEXLOCUS_MINOR_RETRIES', default=5, cast=int),
    'INTERPOLATION_CHECKS': config('FLEXLOCUS_INTERPOLATION_CHECKS', default=10, cast=int),
    'ENUMERATION_LIMIT': config('FLEXLOCUS_ENUMERATION_LIMIT', default=10_000_000, cast=int),
    'FLEX_SAMPLING_ATTEMPTS': config('FLEXLOCUS_FLEX_SAMPLING_ATTEMPTS', default=40, cast=int),
    'OSCULATION_SAMPLES': config('FLEXLOCUS_OSCULATION_SAMPLES', default=64, cast=int),
}

# Cache configuration
# Redis keeps flex polynomials across invocations; without it each run
# falls back to a per-process local memory cache.
CACHE_TTL = config('FLEXLOCUS_CACHE_TTL', default=60 * 60 * 24, cast=int)

REDIS_URL = config('REDIS_URL', default='')

if REDIS_URL:
    CACHES = {
        'default': {
            'BACKEND': 'django_redis.cache.RedisCache',
            'LOCATION': REDIS_URL,
            'OPTIONS': {
                'CLIENT_CLASS': 'django_redis.client.DefaultClient',
                'CONNECTION_POOL_KWARGS': {
                    'retry_on_timeout': True,
                    'socket_connect_timeout': 5,
                    'socket_timeout': 5,
                },
                'IGNORE_EXCEPTIONS': True,
            },
            'KEY_PREFIX': 'flexlocus',
            'TIMEOUT': CACHE_TTL,
        }
    }
else:
    CACHES = {
        'default': {
            'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
            'LOCATION': 'flexlocus',
            'TIMEOUT': CACHE_TTL,
        }
    }

# Logging Configuration
# Console output goes to stderr so that command stdout stays reproducible.
LOG_DIR = Path(config('FLEXLOCUS_LOG_DIR', default=str(BASE_DIR / 'logs')))
LOG_DIR.mkdir(parents=True, exist_ok=True)

LOG_LEVEL = config('FLEXLOCUS_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'file': {
            'level': 'DEBUG',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': LOG_DIR / 'flexlocus.log',
            'maxBytes': 5 * 1024 * 1024,
            'backupCount': 3,
            'formatter': 'verbose',
        },
        'console': {
            'level': 'WARNING',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['file', 'console'],
            'level': 'WARNING',
            'propagate': False,
        },
        'polycore': {
            'handlers': ['file', 'console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'resultant': {
            'handlers': ['file', 'console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'flex': {
            'handlers': ['file', 'console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'oracle': {
            'handlers': ['file', 'console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'cli': {
            'handlers': ['file', 'console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'utils': {
            'handlers': ['file', 'console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}
