"""
Générateur SPAC-Net - Encodage, génération grossière, SSP et pliage

Ce module assemble le générateur de complétion guidé par l'interface:

Pipeline de la passe avant:
    1. Encodage: F_P par deux étages de set abstraction (centres FPS puis
       centres sur l'interface), F_PT par trois EdgeConv ancrées sur
       l'interface (la première sur les coordonnées du partiel, les
       suivantes sur un graphe dynamique des caractéristiques)
    2. Forme grossière O, un point par point d'interface:
       - interface_displacement: o_i = γ(β(α(F_PT_i))) + t_i, β étant un
         maximum sur G groupes de canaux de chaque ligne
       - global_feature: α, maximum sur l'ensemble, γ vers 3·n_t
    3. F_M⁰ = MLP([O ‖ F_P])
    4. Étages SSP: F_Mˢ = F_Mˢ⁻¹ + Att(F, F, F) + α1(Att(F, F_P, F_P)),
       oˢ = oˢ⁻¹ + α2(F_Mˢ) avec o⁰ = O
    5. Pliage: chaque oᵢ est dupliqué r fois; [F_Mᵢ ‖ grille 2D] passe dans
       deux MLP de pliage successifs; M′ = σ(F_M) + oᵢ
    6. Nuage complet: P ‖ M′ (le partiel est conservé tel quel en tête)

Perte jointe:
    Γ = λ1·CD_ℓ2(O, FPS(M, n_t)) + λ2·CD_ℓ2(M′, M), plus en option un terme
    par étage intermédiaire oˢ.

Fichier: src/models/spacnet.py
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.models.interface import InterfaceResult
from src.models.model_config import CoarseMode, ModelConfig, TrainConfig
from src.models.point_cloud import PointCloud, PointLabel
from src.nn import ops
from src.nn.layers import EdgeConv, Linear, MultiHeadAttention, ParamStore, SetAbstraction, SharedMLP
from src.nn.tensor import Tensor
from src.services.geometry_service import farthest_point_indices
from src.utils.validators import DataValidator, ValidationError


def _cloud(tensor: Tensor) -> PointCloud:
    return PointCloud(np.asarray(tensor.data, dtype=np.float64))


@dataclass
class ForwardOutput:
    """
    Résultat d'une passe avant.

    Attributes:
        coarse_tensor: Forme grossière O (n_t, 3)
        refined_tensors: oˢ de chaque étage SSP
        missing_tensor: Partie manquante prédite M′ (n_t·r, 3)
        complete: P ‖ M′
        features: Accès de diagnostic à F_P, F_PT et F_Mˢ
    """
    coarse_tensor: Tensor
    refined_tensors: List[Tensor]
    missing_tensor: Tensor
    complete: PointCloud
    features: Dict[str, object] = field(default_factory=dict)

    @property
    def coarse(self) -> PointCloud:
        return _cloud(self.coarse_tensor)

    @property
    def refined_stages(self) -> List[PointCloud]:
        return [_cloud(t) for t in self.refined_tensors]

    @property
    def missing_pred(self) -> PointCloud:
        return _cloud(self.missing_tensor)

    def labeled_complete(self) -> PointCloud:
        """Nuage complet étiqueté partiel / prédit pour l'export PLY."""
        n_missing = self.missing_tensor.shape[0]
        labels = np.concatenate([
            np.full(self.complete.count - n_missing, int(PointLabel.PARTIAL), dtype=np.int8),
            np.full(n_missing, int(PointLabel.PREDICTED), dtype=np.int8),
        ])
        return PointCloud(self.complete.points, labels)


class SSPStage:
    """Étage de supplément de structure: attentions résiduelles et raffinement."""

    def __init__(self, store: ParamStore, prefix: str, config: ModelConfig):
        c_m = config.c_m
        self.self_attention = MultiHeadAttention(store, f"{prefix}.self", c_m, config.heads)
        self.cross_attention = MultiHeadAttention(store, f"{prefix}.cross", c_m, config.heads,
                                                  kv_dim=config.c_p)
        self.alpha1 = SharedMLP(store, f"{prefix}.alpha1", [c_m, c_m, c_m])
        self.alpha2 = SharedMLP(store, f"{prefix}.alpha2", [c_m, max(c_m // 2, 1), 3])
        self.prefix = prefix

    def __call__(self, f_m: Tensor, f_p: Tensor, o_prev: Tensor) -> Tuple[Tensor, Tensor]:
        if f_m.shape[-1] != self.self_attention.dim:
            raise ValidationError(VALIDATION_MESSAGES["shape_mismatch"].format(
                op=self.prefix, left=f_m.shape, right=(self.self_attention.dim,)))
        self_term = self.self_attention(f_m, f_m, f_m)
        cross_term = self.alpha1(self.cross_attention(f_m, f_p, f_p))
        f_next = ops.add(ops.add(f_m, self_term), cross_term)
        return f_next, ops.add(o_prev, self.alpha2(f_next))


class SPACNet:
    """
    Générateur de complétion guidé par l'interface.

    Args:
        config: Hyper-paramètres du modèle
        seed: Graine de l'initialisation des paramètres

    Attributes:
        store: Registre des paramètres (et état de l'optimiseur)
    """

    def __init__(self, config: ModelConfig, seed: int = 0):
        self.config = config
        self.store = ParamStore(seed)
        store, c = self.store, config
        half = c.c_p // 2
        self.sa1 = SetAbstraction(store, "encoder.sa1", 3, [half, half], k=c.sa_k, heads=c.heads)
        self.sa2 = SetAbstraction(store, "encoder.sa2", half, [c.c_p, c.c_p],
                                  k=min(c.sa_k, c.sa_centers), heads=c.heads)
        e1, e2 = max(c.c_t // 4, 1), max(c.c_t // 2, 1)
        self.edge1 = EdgeConv(store, "encoder.edge1", 3, [e1], k=min(c.edge_k, c.n_input))
        self.edge2 = EdgeConv(store, "encoder.edge2", e1, [e2], k=min(c.edge_k, c.n_t))
        self.edge3 = EdgeConv(store, "encoder.edge3", e2, [c.c_t], k=min(c.edge_k, c.n_t))
        if c.coarse_mode is CoarseMode.INTERFACE_DISPLACEMENT:
            self.coarse_alpha = SharedMLP(store, "coarse.alpha", [c.c_t, c.c_t, 2 * c.c_t])
            self.coarse_gamma = Linear(store, "coarse.gamma", 2 * c.c_t // c.coarse_groups, 3)
        else:
            self.global_alpha = SharedMLP(store, "global.alpha", [c.c_p, c.c_p, 2 * c.c_p])
            self.global_gamma = Linear(store, "global.gamma", 2 * c.c_p, 3 * c.n_t)
        self.init_mlp = SharedMLP(store, "init", [3 + c.c_p, c.c_m, c.c_m])
        self.stages = [SSPStage(store, f"ssp{index}", c) for index in range(c.ssp_stages)]
        self.fold1 = SharedMLP(store, "fold.fold1", [c.c_m + 2, c.c_m, c.c_m, 3])
        self.fold2 = SharedMLP(store, "fold.fold2", [c.c_m + 3, c.c_m, c.c_m, 3])
        self.grid = self._grid_codes()

    # ===== INITIALISATIONS PARTICULIÈRES =====

    def zero_displacement_head(self) -> None:
        """Annuler la tête de déplacement: O == T exactement."""
        self.store.zero("coarse.gamma.")

    def zero_ssp_projections(self) -> None:
        """Annuler W_o des deux attentions et la dernière couche de α1 de chaque étage."""
        last = len(self.stages[0].alpha1.layers) - 1 if self.stages else 0
        for index in range(len(self.stages)):
            self.store.zero(f"ssp{index}.self.w_o.", f"ssp{index}.cross.w_o.",
                            f"ssp{index}.alpha1.{last}.")

    def zero_fold_head(self) -> None:
        """Annuler la dernière couche du second pliage: M′ = oᵢ répétés."""
        self.store.zero(f"fold.fold2.{len(self.fold2.layers) - 1}.")

    # ===== BLOCS =====

    def _grid_codes(self) -> np.ndarray:
        gh, gw = self.config.fold_grid
        lo, hi = self.config.grid_lo, self.config.grid_hi

        def axis(count: int) -> np.ndarray:
            return np.array([(lo + hi) / 2.0]) if count == 1 else np.linspace(lo, hi, count)

        ys, xs = np.meshgrid(axis(gh), axis(gw), indexing="ij")
        return np.stack([ys.reshape(-1), xs.reshape(-1)], axis=1)

    def encode(self, partial: PointCloud, interface: InterfaceResult) -> Tuple[Tensor, Tensor, np.ndarray]:
        """
        Encoder le partiel et l'interface.

        Returns:
            Tuple (F_P (n_t, c_p), F_PT (n_t, c_t), centres t (n_t, 3))

        Raises:
            ValidationError: Tailles différentes de la configuration
        """
        if partial.count != self.config.n_input:
            raise ValidationError(VALIDATION_MESSAGES["integer_out_of_range"].format(
                name="partial.count", value=partial.count,
                low=self.config.n_input, high=self.config.n_input))
        if interface.count != self.config.n_t:
            raise ValidationError(VALIDATION_MESSAGES["integer_out_of_range"].format(
                name="interface.count", value=interface.count,
                low=self.config.n_t, high=self.config.n_t))
        points = partial.points
        centers = interface.points.points
        coords = Tensor(points)
        sa_centers, sa_feats = self.sa1(points, coords, m=self.config.sa_centers)
        _, f_p = self.sa2(sa_centers, sa_feats, centers=centers)
        anchors = Tensor(centers)
        e1 = self.edge1(coords, anchors)
        e2 = self.edge2(e1, e1)
        f_pt = self.edge3(e2, e2)
        return f_p, f_pt, centers

    def coarse_generate_displacement(self, f_pt: Tensor, t: np.ndarray) -> Tensor:
        """o_i = γ(β(α(F_PT_i))) + t_i, lignes alignées avec l'interface."""
        t = np.asarray(t)
        if f_pt.shape[0] != t.shape[0]:
            raise ValidationError(VALIDATION_MESSAGES["misaligned"].format(
                first="F_PT", first_len=f_pt.shape[0], second="t", second_len=t.shape[0]))
        lifted = self.coarse_alpha(f_pt)
        groups = self.config.coarse_groups
        grouped = ops.reshape(lifted, (f_pt.shape[0], groups, lifted.shape[1] // groups))
        pooled, _ = ops.reduce_max_with_indices(grouped, axis=1)
        return ops.add(self.coarse_gamma(pooled), Tensor(t))

    def coarse_generate_global(self, f_p: Tensor) -> Tensor:
        """Variante globale: maximum sur l'ensemble puis couche dense vers n_t points."""
        pooled, _ = ops.reduce_max_with_indices(self.global_alpha(f_p), axis=0)
        flat = self.global_gamma(ops.reshape(pooled, (1, pooled.shape[0])))
        return ops.reshape(flat, (self.config.n_t, 3))

    def init_missing_features(self, coarse: Tensor, f_p: Tensor) -> Tensor:
        """F_M⁰ = MLP([O ‖ F_P])."""
        if coarse.shape[0] != f_p.shape[0]:
            raise ValidationError(VALIDATION_MESSAGES["misaligned"].format(
                first="O", first_len=coarse.shape[0], second="F_P", second_len=f_p.shape[0]))
        return self.init_mlp(ops.concat([coarse, f_p], axis=-1))

    def ssp_stage(self, index: int, f_m: Tensor, f_p: Tensor, o_prev: Tensor) -> Tuple[Tensor, Tensor]:
        """Appliquer l'étage SSP d'indice donné: (F_Mˢ, oˢ)."""
        DataValidator.validate_index(index, len(self.stages), "stage")
        return self.stages[index](f_m, f_p, o_prev)

    def fold_upsample(self, f_m: Tensor, o_final: Tensor) -> Tensor:
        """
        Déplier chaque point raffiné en r points.

        Returns:
            Tensor (n_t·r, 3), les r points de oᵢ étant consécutifs
        """
        count, r = o_final.shape[0], self.config.upsample_factor
        repeated = np.repeat(np.arange(count), r).reshape(count, r)
        feats = ops.gather_rows(f_m, repeated)
        grid = Tensor(np.broadcast_to(self.grid, (count, r, 2)))
        first = self.fold1(ops.concat([feats, grid], axis=-1))
        second = self.fold2(ops.concat([feats, first], axis=-1))
        seeds = ops.gather_rows(o_final, repeated)
        return ops.reshape(ops.add(second, seeds), (count * r, 3))

    def forward(self, partial: PointCloud, interface: InterfaceResult) -> ForwardOutput:
        """
        Passe avant complète.

        Returns:
            ForwardOutput: complete.count == n_input + n_t·r, partiel en tête
        """
        f_p, f_pt, centers = self.encode(partial, interface)
        if self.config.coarse_mode is CoarseMode.INTERFACE_DISPLACEMENT:
            coarse = self.coarse_generate_displacement(f_pt, centers)
        else:
            coarse = self.coarse_generate_global(f_p)
        f_m = self.init_missing_features(coarse, f_p)
        stage_features = [f_m]
        refined = []
        o_current = coarse
        for index in range(len(self.stages)):
            f_m, o_current = self.ssp_stage(index, f_m, f_p, o_current)
            stage_features.append(f_m)
            refined.append(o_current)
        missing = self.fold_upsample(f_m, o_current)
        complete = partial.concat(_cloud(missing))
        return ForwardOutput(coarse, refined, missing, complete,
                             {"F_P": f_p, "F_PT": f_pt, "F_M": stage_features})


def coarse_target(missing: PointCloud, n_t: int) -> np.ndarray:
    """Partie manquante réduite par FPS à n_t points (cible du terme grossier)."""
    if missing is None or missing.count == 0:
        raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])
    m = min(n_t, missing.count)
    return missing.points[farthest_point_indices(missing.points, m, 0)]


def joint_loss(out: ForwardOutput, missing: Optional[PointCloud],
               train_config: Optional[TrainConfig] = None,
               target_coarse: Optional[np.ndarray] = None) -> Tuple[Tensor, Dict[str, float]]:
    """
    Perte jointe Γ = λ1·Γ_partiel + λ2·Γ_complet (+ termes intermédiaires).

    Args:
        out: Sortie de la passe avant
        missing: Partie manquante de vérité terrain
        train_config: Poids λ (défaut: λ1 = λ2 = 1, sans supervision intermédiaire)
        target_coarse: Cible grossière précalculée (sinon FPS de missing)

    Returns:
        Tuple (perte scalaire, composantes en float)

    Raises:
        ValidationError: Partie manquante absente ou vide
    """
    train_config = train_config or TrainConfig()
    if missing is None or missing.count == 0:
        raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])
    if target_coarse is None:
        target_coarse = coarse_target(missing, out.coarse_tensor.shape[0])
    partial_term = ops.chamfer_l2_loss(out.coarse_tensor, target_coarse)
    complete_term = ops.chamfer_l2_loss(out.missing_tensor, missing.points)
    loss = ops.add(ops.mul(partial_term, train_config.lambda_partial),
                   ops.mul(complete_term, train_config.lambda_complete))
    parts = {"partial": float(partial_term.data), "complete": float(complete_term.data)}
    if train_config.intermediate_supervision and out.refined_tensors:
        intermediate = [ops.chamfer_l2_loss(stage, target_coarse) for stage in out.refined_tensors]
        total = intermediate[0]
        for term in intermediate[1:]:
            total = ops.add(total, term)
        loss = ops.add(loss, ops.mul(total, train_config.lambda_intermediate))
        parts["intermediate"] = float(total.data)
    parts["total"] = float(loss.data)
    return loss, parts
