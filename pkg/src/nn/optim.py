"""
Optimiseur AdamW et décroissance du taux d'apprentissage

Mise à jour Adam avec décroissance des poids découplée, appliquée avant
le pas de gradient:

    θ ← θ − lr·λ·θ
    m ← β₁·m + (1 − β₁)·g
    v ← β₂·v + (1 − β₂)·g²
    θ ← θ − lr·m̂ / (√v̂ + ε)   avec m̂ = m/(1 − β₁ᵗ), v̂ = v/(1 − β₂ᵗ)

Les moments et le compteur de pas vivent dans le ParamStore. Les pas
sont sérialisés: un seul thread met à jour un ParamStore à la fois.

Fichier: src/nn/optim.py
"""

from typing import Dict, Optional, Tuple

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.nn.layers import ParamStore
from src.utils.validators import DataValidator, ValidationError


def decayed_learning_rate(initial_lr: float, decay: float, epoch: int) -> float:
    """Taux après epoch époques: lr₀·(1 − decay)^epoch."""
    return float(initial_lr) * (1.0 - float(decay)) ** int(epoch)


def adamw_step(store: ParamStore, grads: Optional[Dict[str, np.ndarray]] = None,
               lr: float = 5e-4, weight_decay: float = 5e-4,
               betas: Tuple[float, float] = (0.9, 0.999), eps: float = 1e-8) -> ParamStore:
    """
    Appliquer un pas AdamW à tous les paramètres du registre.

    Args:
        store: Registre des paramètres et de l'état
        grads: Gradients par nom; par défaut, les .grad des paramètres
            (un gradient absent vaut zéro)
        lr: Taux d'apprentissage
        weight_decay: Coefficient de décroissance découplée
        betas: Coefficients (β₁, β₂) dans [0, 1)
        eps: Terme de stabilité

    Returns:
        ParamStore: Le registre mis à jour (en place)

    Raises:
        ValidationError: Gradient de forme incorrecte ou nom inconnu
    """
    lr = DataValidator.validate_non_negative_real(lr, "lr")
    weight_decay = DataValidator.validate_non_negative_real(weight_decay, "weight_decay")
    beta1, beta2 = betas
    for beta in betas:
        if not 0.0 <= beta < 1.0:
            raise ValidationError(VALIDATION_MESSAGES["betas_invalid"].format(value=betas))
    if grads is not None:
        for name in grads:
            if name not in store:
                raise ValidationError(VALIDATION_MESSAGES["parameter_unknown"].format(name=name))
    # toutes les formes sont vérifiées avant de toucher à l'état
    aligned = {}
    for name, param in store.items():
        grad = param.grad if grads is None else grads.get(name)
        grad = np.zeros_like(param.data) if grad is None else np.asarray(grad)
        if grad.shape != param.data.shape:
            raise ValidationError(VALIDATION_MESSAGES["gradients_misaligned"].format(name=name))
        aligned[name] = grad
    store.step += 1
    correction1 = 1.0 - beta1 ** store.step
    correction2 = 1.0 - beta2 ** store.step
    for name, param in store.items():
        grad = aligned[name]
        dtype = param.data.dtype
        m = store.first_moment[name] = (beta1 * store.first_moment[name] + (1.0 - beta1) * grad).astype(dtype)
        v = store.second_moment[name] = (beta2 * store.second_moment[name]
                                         + (1.0 - beta2) * grad * grad).astype(dtype)
        decayed = param.data - lr * weight_decay * param.data
        update = lr * (m / correction1) / (np.sqrt(v / correction2) + eps)
        param.data = (decayed - update).astype(dtype)
    return store


class AdamW:
    """Optimiseur AdamW lié à un registre, avec décroissance par époque."""

    def __init__(self, store: ParamStore, lr: float = 5e-4, weight_decay: float = 5e-4,
                 betas: Tuple[float, float] = (0.9, 0.999), eps: float = 1e-8,
                 lr_decay: float = 5e-4):
        self.store = store
        self.initial_lr = DataValidator.validate_positive_real(lr, "lr")
        self.weight_decay = weight_decay
        self.betas = tuple(betas)
        self.eps = eps
        self.lr_decay = lr_decay
        self.lr = self.initial_lr

    def set_epoch(self, epoch: int) -> float:
        """Fixer le taux pour l'époque (0 pour la première)."""
        self.lr = decayed_learning_rate(self.initial_lr, self.lr_decay, epoch)
        return self.lr

    def step(self) -> None:
        adamw_step(self.store, None, self.lr, self.weight_decay, self.betas, self.eps)

    def zero_grad(self) -> None:
        self.store.zero_grad()
