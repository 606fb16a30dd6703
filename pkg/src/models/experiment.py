"""
Manifeste d'expérience - Description reproductible d'une exécution

Un manifeste JSON regroupe tout ce qui détermine une exécution:

Sections:
    - model: ModelConfig (tailles, largeurs, étages SSP, mode grossier)
    - interface: InterfaceConfig (mode, n_t, rayon r, seuil δ)
    - train: TrainConfig (époques, AdamW, poids λ)
    - dataset: DatasetDescriptor (formes, points de vue, difficultés)
    - output_dir: dossier des jeux de données, checkpoints et rapports
    - seed: graine globale dont dérivent toutes les graines par échantillon

Les sections absentes prennent leurs valeurs par défaut. Les options de
la ligne de commande remplacent les champs correspondants.

Fichier: src/models/experiment.py
"""

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple, Union

from src.config.messages import FILE_MESSAGES, VALIDATION_MESSAGES
from src.models.interface import InterfaceConfig, InterfaceMode
from src.models.model_config import ModelConfig, TrainConfig
from src.models.occlusion_sample import CutKind, Difficulty, ShapeKind, ShapeSpec
from src.utils.point_io import PointFileError
from src.utils.seed_utils import derive_seed
from src.utils.validators import DataValidator, ValidationError


DEFAULT_SHAPE_KINDS = (ShapeKind.SPHERE, ShapeKind.BOX, ShapeKind.CYLINDER, ShapeKind.TORUS,
                       ShapeKind.L_BRACKET, ShapeKind.TABLE)


def default_shapes(seed: int, count: int, sample_count: int = 2048) -> Tuple[ShapeSpec, ...]:
    """Formes par défaut: familles en boucle, graine dérivée de l'indice de forme."""
    count = DataValidator.validate_positive_int(count, "shape_count")
    return tuple(
        ShapeSpec(DEFAULT_SHAPE_KINDS[index % len(DEFAULT_SHAPE_KINDS)],
                  sample_count=sample_count, seed=derive_seed(seed, index) % (2 ** 31))
        for index in range(count)
    )


@dataclass(frozen=True)
class DatasetDescriptor:
    """
    Protocole de génération du jeu de données.

    Attributes:
        shapes: Formes de vérité terrain (une entrée par identifiant de forme)
        train_views: Nombre de points de vue aléatoires par forme (split train)
        difficulties: Niveaux de difficulté utilisés
        cut_kind: Découpe par point de vue ou par sphère
        input_size: Taille du scan partiel après réduction FPS
        library_size: Taille de la bibliothèque MMD (0: pas de MMD)
    """
    shapes: Tuple[ShapeSpec, ...] = ()
    train_views: int = 8
    difficulties: Tuple[Difficulty, ...] = (Difficulty.EASY, Difficulty.MEDIUM, Difficulty.HARD)
    cut_kind: CutKind = CutKind.VIEWPOINT
    input_size: int = 512
    library_size: int = 0

    def __post_init__(self):
        object.__setattr__(self, "shapes", tuple(
            shape if isinstance(shape, ShapeSpec) else ShapeSpec.from_dict(shape)
            for shape in self.shapes))
        DataValidator.validate_positive_int(self.train_views, "train_views", minimum=0)
        DataValidator.validate_positive_int(self.input_size, "input_size")
        DataValidator.validate_positive_int(self.library_size, "library_size", minimum=0)
        levels = tuple(DataValidator.validate_enum(level, Difficulty, "difficulty")
                       for level in self.difficulties)
        if not levels:
            raise ValidationError(VALIDATION_MESSAGES["config_invalid"].format(
                detail="au moins une difficulté"))
        object.__setattr__(self, "difficulties", levels)
        object.__setattr__(self, "cut_kind", DataValidator.validate_enum(
            self.cut_kind, CutKind, "cut_kind"))

    @classmethod
    def overfit(cls, seed: int = 0) -> "DatasetDescriptor":
        """Protocole de sur-apprentissage: 4 formes × 4 occlusions moyennes, 2048 → 512."""
        return cls(shapes=default_shapes(seed, 4), train_views=4,
                   difficulties=(Difficulty.MEDIUM,), cut_kind=CutKind.VIEWPOINT,
                   input_size=512)

    def to_dict(self) -> dict:
        return {
            "shapes": [shape.to_dict() for shape in self.shapes],
            "train_views": self.train_views,
            "difficulties": [level.value for level in self.difficulties],
            "cut_kind": self.cut_kind.value,
            "input_size": self.input_size,
            "library_size": self.library_size,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DatasetDescriptor":
        known = {name: value for name, value in data.items() if name in cls.__dataclass_fields__}
        if "shapes" in known:
            known["shapes"] = tuple(ShapeSpec.from_dict(shape) for shape in known["shapes"])
        if "difficulties" in known:
            known["difficulties"] = tuple(known["difficulties"])
        return cls(**known)


@dataclass(frozen=True)
class ExperimentManifest:
    """Configuration complète et reproductible d'une expérience."""
    model: ModelConfig = field(default_factory=ModelConfig)
    interface: InterfaceConfig = field(
        default_factory=lambda: InterfaceConfig(InterfaceMode.OCCLUSION_POINT))
    train: TrainConfig = field(default_factory=TrainConfig)
    dataset: DatasetDescriptor = field(default_factory=DatasetDescriptor)
    output_dir: str = "runs/default"
    seed: int = 0

    def __post_init__(self):
        DataValidator.validate_positive_int(self.seed, "seed", minimum=0)
        if not self.dataset.shapes:
            object.__setattr__(self, "dataset", replace(self.dataset,
                                                        shapes=default_shapes(self.seed, 10)))
        if self.interface.n_t != self.model.n_t:
            raise ValidationError(VALIDATION_MESSAGES["config_invalid"].format(
                detail=f"interface.n_t={self.interface.n_t} ≠ model.n_t={self.model.n_t}"))
        if self.dataset.input_size != self.model.n_input:
            raise ValidationError(VALIDATION_MESSAGES["config_invalid"].format(
                detail=f"dataset.input_size={self.dataset.input_size} ≠ model.n_input={self.model.n_input}"))

    def uses_default_shapes(self) -> bool:
        """Formes identiques à celles dérivées de la graine du manifeste."""
        shapes = self.dataset.shapes
        return bool(shapes) and shapes == default_shapes(self.seed, len(shapes), shapes[0].sample_count)

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir)

    @property
    def dataset_dir(self) -> Path:
        return self.output_path / "dataset"

    @property
    def checkpoint_dir(self) -> Path:
        return self.output_path / "checkpoints"

    def with_overrides(self, seed: Optional[int] = None, output_dir: Optional[str] = None,
                       interface: Optional[InterfaceConfig] = None,
                       epochs: Optional[int] = None) -> "ExperimentManifest":
        """
        Appliquer les options de la ligne de commande.

        Une nouvelle graine redérive aussi les formes lorsqu'elles sont
        celles par défaut; des formes explicites sont conservées.
        """
        changes = {}
        train_changes = {}
        if seed is not None:
            changes["seed"] = seed
            train_changes["seed"] = seed
            if self.uses_default_shapes():
                shapes = self.dataset.shapes
                changes["dataset"] = replace(self.dataset, shapes=default_shapes(
                    seed, len(shapes), shapes[0].sample_count))
        if epochs is not None:
            train_changes["epochs"] = epochs
        if train_changes:
            changes["train"] = self.train.with_changes(**train_changes)
        if output_dir is not None:
            changes["output_dir"] = str(output_dir)
        if interface is not None:
            changes["interface"] = interface
        return replace(self, **changes) if changes else self

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "interface": self.interface.to_dict(),
            "train": self.train.to_dict(),
            "dataset": self.dataset.to_dict(),
            "output_dir": self.output_dir,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentManifest":
        model = ModelConfig.from_dict(data.get("model", {}))
        interface_data = dict(data.get("interface", {}))
        interface_data.setdefault("mode", InterfaceMode.OCCLUSION_POINT.value)
        interface_data.setdefault("n_t", model.n_t)
        dataset_data = dict(data.get("dataset", {}))
        dataset_data.setdefault("input_size", model.n_input)
        return cls(
            model=model,
            interface=InterfaceConfig.from_dict(interface_data),
            train=TrainConfig.from_dict(data.get("train", {})),
            dataset=DatasetDescriptor.from_dict(dataset_data),
            output_dir=str(data.get("output_dir", "runs/default")),
            seed=int(data.get("seed", 0)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(self.to_json() + "\n", encoding="utf-8")
        except OSError as e:
            raise PointFileError(FILE_MESSAGES["unwritable"].format(path=path, error=e), path)
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentManifest":
        """
        Lire un manifeste JSON.

        Raises:
            PointFileError: Fichier absent ou illisible
            ValidationError: JSON invalide ou valeurs hors domaine
        """
        path = Path(path)
        if not path.is_file():
            raise PointFileError(FILE_MESSAGES["not_found"].format(path=path), path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as e:
            raise PointFileError(FILE_MESSAGES["unreadable"].format(path=path, error=e), path)
        except json.JSONDecodeError as e:
            raise ValidationError(FILE_MESSAGES["manifest_invalid"].format(path=path, detail=e))
        if not isinstance(data, dict):
            raise ValidationError(FILE_MESSAGES["manifest_invalid"].format(
                path=path, detail="objet JSON attendu"))
        try:
            return cls.from_dict(data)
        except (KeyError, TypeError) as e:
            raise ValidationError(FILE_MESSAGES["manifest_invalid"].format(path=path, detail=e))

    def shape_count(self) -> int:
        return len(self.dataset.shapes)

    def sample_counts(self) -> dict:
        """Nombre d'échantillons attendu par split."""
        return {"train": self.shape_count() * self.dataset.train_views,
                "test": self.shape_count() * 8 * len(self.dataset.difficulties)}
