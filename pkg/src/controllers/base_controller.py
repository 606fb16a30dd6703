"""
Contrôleur de base pour SPAC-Net desk

Ce module fournit la classe BaseController, fondation des contrôleurs qui
orchestrent les services pour chaque commande de la ligne de commande.

Responsabilités communes:
    - Chargement du manifeste d'expérience et application des options CLI
    - Construction de la configuration d'interface depuis les options
    - Conversion des coordonnées saisies ("x,y,z") en Point3
    - Accès transactionnel au registre des évaluations (commit/rollback)

Fichier: src/controllers/base_controller.py
"""

from pathlib import Path
from typing import Optional, Union

from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session

from src.config.messages import GENERAL_MESSAGES, VALIDATION_MESSAGES
from src.models.experiment import ExperimentManifest
from src.models.interface import InterfaceConfig, InterfaceMode
from src.models.point_cloud import Point3
from src.services.logging_service import logger
from src.utils.validators import DataValidator, ValidationError


class BaseController:
    """
    Contrôleur de base.

    Args:
        db_session: Session du registre des évaluations (facultative,
            seules les commandes eval --record et history l'utilisent)
    """

    def __init__(self, db_session: Optional[Session] = None):
        self.db = db_session
        self.validator = DataValidator()
        self.logger = logger

    def load_manifest(self, path: Union[str, Path, None] = None, seed: Optional[int] = None,
                      output_dir: Optional[str] = None,
                      epochs: Optional[int] = None) -> ExperimentManifest:
        """
        Charger un manifeste (valeurs par défaut si aucun chemin) et appliquer
        les options --seed, --out et --epochs.
        """
        manifest = ExperimentManifest() if path is None else ExperimentManifest.load(path)
        return manifest.with_overrides(seed=seed, output_dir=output_dir, epochs=epochs)

    @staticmethod
    def interface_config(base: Optional[InterfaceConfig] = None, mode: Optional[str] = None,
                         n_t: Optional[int] = None, delta: Optional[float] = None,
                         radius: Optional[float] = None) -> InterfaceConfig:
        """Configuration d'interface où chaque option fournie remplace la valeur de base."""
        base = base or InterfaceConfig(InterfaceMode.OCCLUSION_POINT)
        return InterfaceConfig(
            mode=base.mode if mode is None else InterfaceMode.from_cli(mode),
            n_t=base.n_t if n_t is None else n_t,
            radius_r=base.radius_r if radius is None else radius,
            delta=base.delta if delta is None else delta,
            min_neighbors=base.min_neighbors,
        )

    @staticmethod
    def parse_point(text: Optional[str]) -> Optional[Point3]:
        """
        Convertir "x,y,z" en Point3.

        Raises:
            ValidationError: Texte mal formé ou coordonnées non finies
        """
        if text is None:
            return None
        tokens = [token for token in text.replace(";", ",").split(",") if token.strip()]
        try:
            values = [float(token) for token in tokens]
        except ValueError:
            raise ValidationError(VALIDATION_MESSAGES["point_arity"].format(count=len(tokens)))
        return Point3.from_array(values)

    def safe_commit(self):
        """
        Valider la transaction en cours.

        Raises:
            ValidationError: Erreur SQLAlchemy (transaction annulée)
        """
        try:
            self.db.commit()
        except SQLAlchemyError as e:
            self.db.rollback()
            raise ValidationError(GENERAL_MESSAGES["database_error"].format(error=e))
