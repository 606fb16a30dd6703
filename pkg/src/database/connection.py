"""
Connexion SQLAlchemy au registre des évaluations

L'URL provient de SPACNET_RESULTS_DB (défaut: fichier SQLite local). Le
fichier SQLite n'est créé qu'à la première connexion.

Fichier: src/database/connection.py
"""
from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from src.config.settings import RESULTS_DATABASE_URL

engine = create_engine(RESULTS_DATABASE_URL, echo=False)

SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

Base = declarative_base()


def create_tables(bind=None):
    """Créer les tables manquantes (moteur global par défaut)."""
    # import requis pour enregistrer les modèles dans Base.metadata
    import src.models.evaluation_record  # noqa: F401
    Base.metadata.create_all(bind=bind or engine)
