"""
Configurations du modèle et de l'entraînement

Ce module définit les hyper-paramètres du générateur SPAC-Net et de sa
boucle d'entraînement, sérialisables en JSON (manifeste d'expérience et
en-tête de checkpoint).

Configuration desk par défaut:
    - Partiel de 512 points, interface de 64 points
    - Largeurs c_p = c_t = c_m = 128, 4 têtes d'attention
    - 3 étages SSP, facteur de suréchantillonnage r = 8 (grille 2 × 4)
    - Partie manquante prédite: n_t · r = 512 points

Contraintes:
    - c_p == c_t (fusion des caractéristiques d'encodage)
    - fold_grid[0] · fold_grid[1] == upsample_factor
    - c_m et c_p divisibles par le nombre de têtes

Fichier: src/models/model_config.py
"""

import enum
import math
from dataclasses import asdict, dataclass, replace
from typing import Optional, Tuple

from src.config.messages import VALIDATION_MESSAGES
from src.utils.validators import DataValidator, ValidationError


class CoarseMode(enum.Enum):
    """Génération grossière: déplacement de l'interface ou caractéristique globale."""
    INTERFACE_DISPLACEMENT = "interface_displacement"
    GLOBAL_FEATURE = "global_feature"


def default_fold_grid(r: int) -> Tuple[int, int]:
    """Factorisation r = gh·gw la plus carrée possible (gh ≤ gw)."""
    gh = int(math.isqrt(r))
    while r % gh:
        gh -= 1
    return gh, r // gh


@dataclass(frozen=True)
class ModelConfig:
    """
    Hyper-paramètres du générateur.

    Attributes:
        n_input: Taille du scan partiel
        n_t: Taille de l'interface (et de la forme grossière)
        c_p: Largeur de F_P
        c_t: Largeur de F_PT
        c_m: Largeur de F_M
        ssp_stages: Nombre d'étages SSP (≥ 0)
        heads: Têtes d'attention
        upsample_factor: Facteur r du suréchantillonnage par pliage
        fold_grid: Factorisation (gh, gw) de r, déduite si absente
        grid_lo, grid_hi: Bornes de la grille de pliage
        coarse_mode: Mode de génération grossière
        sa_centers: Nombre de centres du premier étage de set abstraction
        sa_k: Taille des groupes de set abstraction
        edge_k: Nombre de voisins des EdgeConv
        coarse_groups: Nombre de groupes G du pooling par point (β)
    """
    n_input: int = 512
    n_t: int = 64
    c_p: int = 128
    c_t: int = 128
    c_m: int = 128
    ssp_stages: int = 3
    heads: int = 4
    upsample_factor: int = 8
    fold_grid: Optional[Tuple[int, int]] = None
    grid_lo: float = -1.0
    grid_hi: float = 1.0
    coarse_mode: CoarseMode = CoarseMode.INTERFACE_DISPLACEMENT
    sa_centers: int = 128
    sa_k: int = 16
    edge_k: int = 16
    coarse_groups: int = 4

    def __post_init__(self):
        for name in ("n_input", "n_t", "c_p", "c_t", "c_m", "heads", "upsample_factor",
                     "sa_centers", "sa_k", "edge_k", "coarse_groups"):
            DataValidator.validate_positive_int(getattr(self, name), name)
        DataValidator.validate_positive_int(self.ssp_stages, "ssp_stages", minimum=0)
        object.__setattr__(self, "coarse_mode",
                           DataValidator.validate_enum(self.coarse_mode, CoarseMode, "coarse_mode"))
        grid = default_fold_grid(self.upsample_factor) if self.fold_grid is None else tuple(self.fold_grid)
        if len(grid) != 2 or grid[0] * grid[1] != self.upsample_factor:
            raise ValidationError(VALIDATION_MESSAGES["fold_grid_invalid"].format(
                grid=grid, r=self.upsample_factor))
        object.__setattr__(self, "fold_grid", (int(grid[0]), int(grid[1])))
        checks = [
            (self.c_p == self.c_t, "c_p == c_t"),
            (self.n_t <= self.n_input, "n_t ≤ n_input"),
            (self.sa_centers <= self.n_input, "sa_centers ≤ n_input"),
            (self.sa_k <= self.sa_centers, "sa_k ≤ sa_centers"),
            (self.c_m % self.heads == 0 and self.c_p % self.heads == 0, "largeurs divisibles par heads"),
            (self.c_p % 2 == 0 and (self.c_p // 2) % self.heads == 0, "c_p/2 divisible par heads"),
            ((2 * self.c_t) % self.coarse_groups == 0, "2·c_t divisible par coarse_groups"),
            (self.grid_lo < self.grid_hi, "grid_lo < grid_hi"),
        ]
        for valid, detail in checks:
            if not valid:
                raise ValidationError(VALIDATION_MESSAGES["config_invalid"].format(detail=detail))

    @property
    def missing_size(self) -> int:
        """Taille N_M′ de la partie manquante prédite."""
        return self.n_t * self.upsample_factor

    @property
    def complete_size(self) -> int:
        return self.n_input + self.missing_size

    def with_changes(self, **changes) -> "ModelConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["coarse_mode"] = self.coarse_mode.value
        data["fold_grid"] = list(self.fold_grid)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        known = {name: value for name, value in data.items() if name in cls.__dataclass_fields__}
        if known.get("fold_grid") is not None:
            known["fold_grid"] = tuple(known["fold_grid"])
        return cls(**known)


@dataclass(frozen=True)
class TrainConfig:
    """
    Paramètres de la boucle d'entraînement.

    Attributes:
        epochs: Nombre d'époques
        learning_rate: Taux initial lr₀
        lr_decay: Décroissance multiplicative par époque
        weight_decay: Décroissance découplée AdamW
        betas: Coefficients (β₁, β₂)
        eps: Terme de stabilité AdamW
        lambda_partial: Poids λ1 du terme grossier
        lambda_complete: Poids λ2 du terme complet
        intermediate_supervision: Superviser chaque o^s
        lambda_intermediate: Poids des termes intermédiaires
        checkpoint_every: Période d'écriture des checkpoints (0: fin seule)
        seed: Graine de l'initialisation et de l'ordre des échantillons
        nan_check: Vérifier la finitude après chaque opération
    """
    epochs: int = 300
    learning_rate: float = 5e-4
    lr_decay: float = 5e-4
    weight_decay: float = 5e-4
    betas: Tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8
    lambda_partial: float = 1.0
    lambda_complete: float = 1.0
    intermediate_supervision: bool = False
    lambda_intermediate: float = 1.0
    checkpoint_every: int = 0
    seed: int = 0
    nan_check: bool = False

    def __post_init__(self):
        DataValidator.validate_positive_int(self.epochs, "epochs")
        DataValidator.validate_positive_real(self.learning_rate, "learning_rate")
        DataValidator.validate_non_negative_real(self.weight_decay, "weight_decay")
        DataValidator.validate_non_negative_real(self.lambda_partial, "lambda_partial")
        DataValidator.validate_non_negative_real(self.lambda_complete, "lambda_complete")
        DataValidator.validate_non_negative_real(self.lambda_intermediate, "lambda_intermediate")
        DataValidator.validate_positive_int(self.checkpoint_every, "checkpoint_every", minimum=0)
        DataValidator.validate_positive_int(self.seed, "seed", minimum=0)
        if not 0.0 <= self.lr_decay < 1.0:
            raise ValidationError(VALIDATION_MESSAGES["open_unit_interval"].format(
                name="lr_decay", value=self.lr_decay))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))

    def with_changes(self, **changes) -> "TrainConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["betas"] = list(self.betas)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        known = {name: value for name, value in data.items() if name in cls.__dataclass_fields__}
        if "betas" in known:
            known["betas"] = tuple(known["betas"])
        return cls(**known)
