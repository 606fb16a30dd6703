"""
Service de journalisation et monitoring avec Sentry pour SPAC-Net desk

Ce module fournit une couche de logging centralisée avec intégration Sentry
pour le suivi des exécutions: synthèse de jeux de données, entraînement,
évaluation et échecs numériques.

Architecture de monitoring:
    1. Logging local: module logging standard, niveau SPACNET_LOG_LEVEL
    2. Sentry: événements et breadcrumbs quand un DSN est configuré
    3. Contexte: graine et empreinte de configuration posées en tags

Types d'événements loggés:
    - Contexte d'exécution: commande, graine, empreinte de configuration
    - Jeu de données écrit: nombre d'échantillons et dossier
    - Époque d'entraînement: breadcrumb (époque, perte moyenne, lr)
    - Checkpoint écrit
    - Échec numérique: NaN/Inf avec l'échantillon fautif (niveau error)
    - Évaluation terminée: colonnes agrégées
    - Exceptions avec contexte

Configuration environnements:
    - Test: Sentry désactivé (PYTEST_CURRENT_TEST)
    - Sans DSN: repli sur le logging standard pour chaque événement

Fichier: src/services/logging_service.py
"""

import logging
import os
from typing import Any, Dict, Optional

import sentry_sdk

from src.config import settings


logging.basicConfig(level=getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING))
_local = logging.getLogger("spacnet")


class SentryLogger:
    """
    Service de logging centralisé avec intégration Sentry.

    Chaque méthode log_* envoie un événement Sentry enrichi (tags, extras)
    si Sentry est initialisé, et sinon écrit une ligne dans le logger local.

    Attributes:
        is_initialized: Vrai si Sentry est configuré et actif
    """

    def __init__(self):
        self.is_initialized = False
        self._setup_sentry()

    def __del__(self):
        if hasattr(self, 'is_initialized') and self.is_initialized:
            try:
                sentry_sdk.flush(timeout=2)
            except Exception:
                pass

    def _setup_sentry(self):
        """
        Initialiser Sentry selon l'environnement.

        Configuration:
            - DSN depuis SENTRY_DSN, environnement depuis SENTRY_ENVIRONMENT
            - Désactivation automatique en mode test (PYTEST_CURRENT_TEST)
        """
        sentry_dsn = os.getenv('SENTRY_DSN', settings.SENTRY_DSN)
        environment = os.getenv('SENTRY_ENVIRONMENT', settings.SENTRY_ENVIRONMENT)

        if os.getenv('PYTEST_CURRENT_TEST'):
            _local.info("Mode test détecté - Sentry désactivé")
            return

        if not sentry_dsn or sentry_dsn == 'your_sentry_dsn_here':
            _local.debug("Sentry DSN non configuré - journalisation locale uniquement")
            return

        try:
            sentry_sdk.init(
                dsn=sentry_dsn,
                environment=environment,
                traces_sample_rate=0.0,
                profiles_sample_rate=0.0,
                max_breadcrumbs=100,  # une par époque sur les entraînements desk
                debug=False,
                attach_stacktrace=True,
                send_default_pii=False,
            )
            self.is_initialized = True
            _local.info(f"Sentry initialisé - Environment: {environment}")

        except Exception as e:
            _local.error(f"Erreur lors de l'initialisation de Sentry: {e}")

    def set_run_context(self, command: str, seed: int, config_hash: Optional[str] = None):
        """
        Poser le contexte d'exécution sur tous les événements suivants.

        Args:
            command: Commande CLI en cours (synth, train, eval...)
            seed: Graine globale du manifeste
            config_hash: Empreinte sha256 de la configuration du modèle
        """
        _local.info(f"Exécution {command} (seed={seed}, config={config_hash or '-'})")
        if not self.is_initialized:
            return

        sentry_sdk.set_tag("command", command)
        sentry_sdk.set_tag("seed", str(seed))
        if config_hash:
            sentry_sdk.set_tag("config_hash", config_hash[:16])

    def log_dataset_written(self, directory: str, counts: Dict[str, int]):
        """Journaliser l'écriture d'un jeu de données (nombre d'échantillons par split)."""
        if not self.is_initialized:
            _local.info(f"Jeu de données écrit dans {directory}: {counts}")
            return

        with sentry_sdk.push_scope() as scope:
            scope.set_tag("action", "dataset_written")
            scope.set_extra("dataset", {"directory": str(directory), "counts": counts})
            sentry_sdk.capture_message(
                f"Jeu de données écrit: {sum(counts.values())} échantillons dans {directory}",
                level="info"
            )

    def log_epoch(self, epoch: int, mean_loss: float, lr: float):
        """Ajouter un breadcrumb par époque d'entraînement."""
        if not self.is_initialized:
            _local.debug(f"Époque {epoch}: perte {mean_loss:.6f}, lr {lr:.3e}")
            return

        sentry_sdk.add_breadcrumb(
            category="training",
            message=f"epoch {epoch}",
            data={"epoch": epoch, "loss": mean_loss, "lr": lr},
            level="info",
        )

    def log_checkpoint_saved(self, path: str, epoch: int):
        if not self.is_initialized:
            _local.info(f"Checkpoint écrit: {path} (époque {epoch})")
            return

        sentry_sdk.add_breadcrumb(category="training", message=f"checkpoint {path}",
                                  data={"epoch": epoch}, level="info")

    def log_numeric_failure(self, sample_id: Optional[str], op: str,
                            record: Optional[Dict[str, Any]] = None):
        """
        Journaliser un échec numérique (NaN ou Inf) pendant l'entraînement.

        Args:
            sample_id: Échantillon en cours de traitement
            op: Opération ou étape fautive
            record: Description de l'échantillon vidé sur disque
        """
        if not self.is_initialized:
            _local.error(f"Échec numérique sur {sample_id} ({op})")
            return

        with sentry_sdk.push_scope() as scope:
            scope.set_tag("action", "numeric_failure")
            scope.set_tag("op", op or "unknown")
            scope.set_extra("sample", record or {"sample_id": sample_id})
            sentry_sdk.capture_message(
                f"Échec numérique sur l'échantillon {sample_id} ({op})",
                level="error"
            )

    def log_evaluation(self, columns: Dict[str, Optional[float]], sample_count: int):
        """Journaliser les colonnes agrégées d'une évaluation."""
        if not self.is_initialized:
            _local.info(f"Évaluation terminée sur {sample_count} échantillons: {columns}")
            return

        with sentry_sdk.push_scope() as scope:
            scope.set_tag("action", "evaluation")
            scope.set_extra("columns", columns)
            scope.set_extra("sample_count", sample_count)
            sentry_sdk.capture_message(
                f"Évaluation terminée: {sample_count} échantillons",
                level="info"
            )

    def log_exception(self, exception: Exception, context: Optional[Dict[str, Any]] = None):
        """
        Journaliser une exception avec contexte.

        Fallback:
            Sans Sentry, utilise le logging standard.
        """
        if not self.is_initialized:
            _local.error(f"Exception: {exception}")
            return

        with sentry_sdk.push_scope() as scope:
            scope.set_tag("action", "exception")
            if context:
                scope.set_extra("context", context)
            sentry_sdk.capture_exception(exception)

    def force_flush(self):
        """Forcer l'envoi des événements en attente (5 s au plus)."""
        if self.is_initialized:
            try:
                sentry_sdk.flush(timeout=5)
            except Exception:
                pass


# Instance globale du service de logging
# Utilisation:
#   from src.services.logging_service import logger
#   logger.log_epoch(epoch, mean_loss, lr)
logger = SentryLogger()
