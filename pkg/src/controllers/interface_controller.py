"""
Contrôleur d'interface - Commande interface

Lit un scan partiel, localise l'interface selon le mode demandé et écrit
un nuage étiqueté: points du partiel en gris, interface en magenta.

Modes:
    - occlusion: les n_t points les plus proches du point d'occlusion
      (--occlusion obligatoire)
    - edges: tous les points de bord détectés (taille variable, sans
      remplissage)
    - downsampled: n_t points FPS du partiel

Fichier: src/controllers/interface_controller.py
"""

from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.models.interface import InterfaceConfig, InterfaceMode, InterfaceResult
from src.models.point_cloud import Point3, PointCloud, PointLabel
from src.services.interface_service import (localize_by_downsampling, localize_by_edges,
                                            localize_by_occlusion)
from src.utils.point_io import read_points, write_points
from src.utils.validators import ValidationError
from .base_controller import BaseController


class InterfaceController(BaseController):
    """Localisation de l'interface d'un fichier de points."""

    def detect(self, partial: PointCloud, config: InterfaceConfig,
               occlusion_point: Optional[Point3] = None) -> InterfaceResult:
        """
        Raises:
            ValidationError: Mode occlusion sans point, n_t hors bornes
        """
        if config.mode is InterfaceMode.OCCLUSION_POINT:
            if occlusion_point is None:
                raise ValidationError(VALIDATION_MESSAGES["occlusion_point_required"])
            return localize_by_occlusion(partial, occlusion_point, config.n_t)
        if config.mode is InterfaceMode.EDGE_DETECTION:
            return localize_by_edges(partial, config)
        return localize_by_downsampling(partial, config.n_t)

    @staticmethod
    def labeled(partial: PointCloud, result: InterfaceResult) -> PointCloud:
        labels = np.full(partial.count, int(PointLabel.PARTIAL), dtype=np.int8)
        labels[result.indices] = int(PointLabel.INTERFACE)
        return PointCloud(partial.points, labels)

    @staticmethod
    def default_output(input_file: Union[str, Path], fmt: str = "ply") -> Path:
        path = Path(input_file)
        return path.with_name(f"{path.stem}_interface.{fmt}")

    def run(self, input_file: Union[str, Path], config: InterfaceConfig,
            occlusion_point: Optional[Point3] = None, output: Union[str, Path, None] = None,
            fmt: str = "ply") -> Tuple[InterfaceResult, Path]:
        """
        Lire, localiser et écrire.

        Returns:
            Tuple (InterfaceResult, chemin du nuage étiqueté)

        Raises:
            PointFileError: Fichier absent ou non inscriptible
            PointFileParseError: Contenu invalide
            ValidationError: Paramètres invalides
        """
        partial = PointCloud(read_points(input_file).points)
        result = self.detect(partial, config, occlusion_point)
        path = Path(output) if output is not None else self.default_output(input_file, fmt)
        written = write_points(path, self.labeled(partial, result), fmt)
        return result, written
