import os
from pathlib import Path
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file
load_dotenv(BASE_DIR / '.env')

# The lab serves no HTTP traffic; the key only satisfies Django's checks.
SECRET_KEY = os.getenv('SECRET_KEY', 'ghzlab-local-secret-key')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'ghzlab',
]

MIDDLEWARE = []

# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.getenv('GHZLAB_DB', str(BASE_DIR / 'db.sqlite3')),
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Acceptance sweeps run only with `manage.py test --tag acceptance`.
TEST_RUNNER = 'ghzlab.runner.LabTestRunner'

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

# ============================================
# LAB CONFIGURATION
# ============================================

GHZLAB = {
    # Ambient dimension cap; one bitset of 2^n entries per event set.
    'MAX_N': int(os.getenv('GHZLAB_MAX_N', 20)),
    # Largest coset enumerated member by member.
    'ENUM_CAP': int(os.getenv('GHZLAB_ENUM_CAP', 2 ** 20)),
    # Largest strategy space (product over players) a value search accepts.
    'SEARCH_CAP': int(os.getenv('GHZLAB_SEARCH_CAP', 2 ** 25)),
    # Largest game support produced by repetition or conditioning.
    'SUPPORT_CAP': int(os.getenv('GHZLAB_SUPPORT_CAP', 2 ** 16)),
    # Bow ties enumerated exactly below this count; sampled above it.
    'BOWTIE_CAP': int(os.getenv('GHZLAB_BOWTIE_CAP', 10 ** 7)),
    # Entries of the |V| x |V| edge grid a part may allocate.
    'EDGE_CAP': int(os.getenv('GHZLAB_EDGE_CAP', 2 ** 20)),
    # Parts held by one affine partition.
    'PART_CAP': int(os.getenv('GHZLAB_PART_CAP', 2 ** 15)),
    'THREADS': int(os.getenv('GHZLAB_THREADS', 1)),
    'SEED': int(os.getenv('GHZLAB_SEED', 0)),
    # Conditioning-walk schedule constants: base^-m >= rho * 2 / c.
    'WALK_BASE': int(os.getenv('GHZLAB_WALK_BASE', 32)),
    'WALK_C': os.getenv('GHZLAB_WALK_C', '1/10'),
    # Largest ambient n the conditioning walk evaluates exhaustively.
    'WALK_MAX_N': int(os.getenv('GHZLAB_WALK_MAX_N', 3)),
    'REPORT_DIR': Path(os.getenv('GHZLAB_REPORT_DIR', BASE_DIR / 'reports')),
}

# ============================================
# LOGGING CONFIGURATION
# ============================================

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': 'INFO',
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
        'file': {
            'level': 'WARNING',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': BASE_DIR / 'logs' / 'ghzlab.log',
            'maxBytes': 1024 * 1024 * 5,  # 5MB
            'backupCount': 5,
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console', 'file'],
            'level': 'WARNING',
            'propagate': False,
        },
        'ghzlab': {
            'handlers': ['console', 'file'],
            'level': 'DEBUG' if DEBUG else 'INFO',
            'propagate': False,
        },
    },
}

# Create logs directory if it doesn't exist
os.makedirs(BASE_DIR / 'logs', exist_ok=True)
