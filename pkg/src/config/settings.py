"""
Configuration d'environnement pour SPAC-Net desk

Ce module centralise les paramètres d'exécution lus depuis l'environnement
(fichier .env via python-dotenv). Les hyper-paramètres d'expérience ne sont
pas ici: ils vivent dans le manifeste JSON d'expérience.

Paramètres configurables:
    - SPACNET_RESULTS_DB: URL SQLAlchemy du registre des évaluations
    - SENTRY_DSN / SENTRY_ENVIRONMENT: monitoring des erreurs
    - SPACNET_LOG_LEVEL: niveau du logging local
    - SPACNET_EVAL_WORKERS: nombre de threads de l'évaluation

Aucune variable n'est obligatoire.

Exemple fichier .env:
```
SPACNET_RESULTS_DB=sqlite:///./runs/results.db
SENTRY_DSN=https://your-sentry-dsn@sentry.io/project
SPACNET_EVAL_WORKERS=8
```

Fichier: src/config/settings.py
"""
import os
from dotenv import load_dotenv

# Chargement des variables d'environnement depuis le fichier .env
load_dotenv()

# Registre SQLite des évaluations par défaut
RESULTS_DATABASE_URL = os.getenv('SPACNET_RESULTS_DB', 'sqlite:///./spacnet_results.db')

# Monitoring
SENTRY_DSN = os.getenv('SENTRY_DSN')
SENTRY_ENVIRONMENT = os.getenv('SENTRY_ENVIRONMENT', 'development')

LOG_LEVEL = os.getenv('SPACNET_LOG_LEVEL', 'WARNING')

EVAL_WORKERS = int(os.getenv('SPACNET_EVAL_WORKERS', '4'))
