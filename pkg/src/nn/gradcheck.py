"""
Vérification des gradients par différences finies centrées

Le gradient analytique (ruban) est comparé aux différences finies
centrées calculées en float64:

    n(ε) = (f(x + ε) − f(x − ε)) / 2ε,  ε = 1e-3

Les coordonnées où n(ε) et n(ε/10) divergent sont des points de
non-dérivabilité (bascule d'un ReLU ou d'un maximum) et sont exclues.
L'erreur relative est |a − n| / max(|a|, |n|, 1e-2).

Une sortie non scalaire est réduite par un produit scalaire avec des
poids aléatoires fixés, ce qui teste toutes les composantes à la fois.

Fichier: src/nn/gradcheck.py
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from src.nn import ops
from src.nn.tensor import GradTape, Tensor, shadow_precision


DENOMINATOR_FLOOR = 1e-2
KINK_TOLERANCE = 1e-5


@dataclass
class GradCheckReport:
    """Résultat d'une vérification: erreur maximale et couverture."""
    max_relative_error: float
    checked: int
    skipped: int

    def passed(self, tolerance: float = 1e-4) -> bool:
        return self.checked > 0 and self.max_relative_error < tolerance


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), DENOMINATOR_FLOOR)


def check_gradients(fn: Callable[[], Tensor], tensors: Sequence[Tensor], eps: float = 1e-3,
                    samples: Optional[int] = None, seed: int = 0) -> GradCheckReport:
    """
    Comparer gradients analytiques et numériques.

    Args:
        fn: Fonction sans argument recalculant la sortie à partir des tenseurs
        tensors: Tenseurs à vérifier (convertis en float64 en place)
        eps: Pas des différences finies
        samples: Nombre de coordonnées tirées par tenseur (toutes si None)
        seed: Graine du tirage et des poids de réduction

    Returns:
        GradCheckReport
    """
    rng = np.random.default_rng(seed)
    for tensor in tensors:
        tensor.data = tensor.data.astype(np.float64)
        tensor.requires_grad = True
        tensor.grad = None

    with shadow_precision():
        reference = fn()
        weights = rng.normal(size=reference.shape) if reference.ndim else None

        def scalar() -> Tensor:
            out = fn()
            return out if weights is None else ops.reduce_sum(ops.mul(out, weights))

        with GradTape() as tape:
            loss = scalar()
        tape.backward(loss)

        def evaluate() -> float:
            return float(scalar().data)

        worst, checked, skipped = 0.0, 0, 0
        for tensor in tensors:
            analytic = np.zeros_like(tensor.data) if tensor.grad is None else tensor.grad
            flat = tensor.data.reshape(-1)
            count = flat.size
            if samples is None or samples >= count:
                coordinates = np.arange(count)
            else:
                coordinates = rng.choice(count, size=samples, replace=False)
            for coordinate in coordinates:
                estimates = []
                for step in (eps, eps / 10.0):
                    original = flat[coordinate]
                    flat[coordinate] = original + step
                    upper = evaluate()
                    flat[coordinate] = original - step
                    lower = evaluate()
                    flat[coordinate] = original
                    estimates.append((upper - lower) / (2.0 * step))
                if _relative(estimates[0], estimates[1]) > KINK_TOLERANCE:
                    skipped += 1
                    continue
                worst = max(worst, _relative(float(analytic.reshape(-1)[coordinate]), estimates[0]))
                checked += 1
    return GradCheckReport(worst, checked, skipped)
