"""
Initialisation du registre des évaluations

Fichier: src/database/init_db.py
"""
from src.database.connection import Base, create_tables, engine
from src.services.logging_service import logger


def init_database(reset: bool = False, bind=None) -> bool:
    """
    Créer les tables du registre.

    Args:
        reset: Supprimer d'abord toutes les tables (historique perdu)
        bind: Moteur cible (moteur global par défaut)

    Returns:
        bool: True si l'initialisation a réussi
    """
    target = bind or engine
    try:
        if reset:
            import src.models.evaluation_record  # noqa: F401
            Base.metadata.drop_all(bind=target)
        create_tables(target)
        return True
    except Exception as e:
        logger.log_exception(e, {'action': 'init_database', 'reset': reset})
        return False


if __name__ == "__main__":
    init_database()
