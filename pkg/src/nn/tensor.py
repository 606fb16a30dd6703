"""
Tenseur dense et ruban de gradients - Différentiation automatique inverse

Ce module fournit le substrat de calcul du réseau: un tenseur dense numpy
et un ruban (GradTape) qui enregistre les opérations pendant la passe
avant pour rejouer leurs règles de dérivation en sens inverse.

Architecture:
    1. Tensor: données numpy, drapeau requires_grad, gradient accumulé
    2. TapeNode: une opération enregistrée (sortie, parents, règle inverse)
    3. GradTape: liste ordonnée des nœuds, ordre topologique par
       construction (un nœud est ajouté après ses parents)
    4. Modes de précision: float32 par défaut, float64 sous
       shadow_precision() pour les vérifications de gradients
    5. Mode de contrôle NaN: chaque sortie d'opération est vérifiée et
       NumericError est levée dès la première valeur non finie

Utilisation:
    with GradTape() as tape:
        loss = ops.reduce_sum(ops.mul(x, x))
    tape.backward(loss)

    Hors d'un ruban actif, les opérations ne sont pas enregistrées
    (inférence sans coût mémoire).

Concurrence:
    Le ruban actif et les modes sont propres à chaque thread
    (threading.local): des échantillons distincts peuvent être traités
    sur des threads distincts avec des rubans distincts.

Fichier: src/nn/tensor.py
"""

import contextlib
import threading
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np


class NumericError(Exception):
    """
    Échec numérique: valeur NaN ou infinie détectée.

    Attributes:
        op: Opération ou étape ayant produit la valeur
        sample_id: Échantillon en cours de traitement, si connu
    """

    def __init__(self, message: str, op: str = "", sample_id: Optional[str] = None):
        super().__init__(message)
        self.op = op
        self.sample_id = sample_id


_state = threading.local()


def _stack() -> List["GradTape"]:
    if not hasattr(_state, "tapes"):
        _state.tapes = []
    return _state.tapes


def current_dtype() -> np.dtype:
    """Type flottant courant: float32, ou float64 sous shadow_precision()."""
    return getattr(_state, "dtype", np.float32)


def nan_check_enabled() -> bool:
    return getattr(_state, "nan_check", False)


@contextlib.contextmanager
def shadow_precision():
    """Calculer en float64 dans le bloc (vérifications de gradients)."""
    previous = current_dtype()
    _state.dtype = np.float64
    try:
        yield
    finally:
        _state.dtype = previous


@contextlib.contextmanager
def nan_check(enabled: bool = True):
    """Activer la vérification de finitude après chaque opération."""
    previous = nan_check_enabled()
    _state.nan_check = enabled
    try:
        yield
    finally:
        _state.nan_check = previous


def active_tape() -> Optional["GradTape"]:
    stack = _stack()
    return stack[-1] if stack else None


class Tensor:
    """
    Tenseur dense à gradient optionnel.

    Attributes:
        data: Tableau numpy (float32 ou float64)
        requires_grad: Vrai pour une feuille à dériver ou une sortie
            enregistrée dépendant d'une telle feuille
        grad: Gradient accumulé après backward (feuilles uniquement)
        name: Nom facultatif (paramètres)
    """

    __array_priority__ = 100

    def __init__(self, data, requires_grad: bool = False, name: str = "", dtype=None):
        self.data = np.array(data, dtype=dtype or current_dtype())
        self.requires_grad = bool(requires_grad)
        self.grad: Optional[np.ndarray] = None
        self.name = name
        self.node: Optional["TapeNode"] = None

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.data.shape)

    @property
    def ndim(self) -> int:
        return self.data.ndim

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def detach(self) -> "Tensor":
        return Tensor(self.data.copy(), dtype=self.data.dtype)

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self) -> None:
        """Rétropropager depuis ce scalaire à travers le ruban qui l'a produit."""
        if self.node is None:
            return
        self.node.tape.backward(self)

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{label}, requires_grad={self.requires_grad})"

    # Les opérateurs délèguent au module ops
    def __add__(self, other):
        from src.nn import ops
        return ops.add(self, other)

    def __radd__(self, other):
        from src.nn import ops
        return ops.add(other, self)

    def __sub__(self, other):
        from src.nn import ops
        return ops.sub(self, other)

    def __rsub__(self, other):
        from src.nn import ops
        return ops.sub(other, self)

    def __mul__(self, other):
        from src.nn import ops
        return ops.mul(self, other)

    def __rmul__(self, other):
        from src.nn import ops
        return ops.mul(other, self)

    def __neg__(self):
        from src.nn import ops
        return ops.mul(self, -1.0)

    def __matmul__(self, other):
        from src.nn import ops
        return ops.matmul(self, other)


BackwardRule = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class TapeNode:
    """Opération enregistrée: sortie, parents et règle de dérivation."""

    __slots__ = ("tape", "op", "output", "parents", "backward")

    def __init__(self, tape: "GradTape", op: str, output: Tensor,
                 parents: Tuple[Tensor, ...], backward: BackwardRule):
        self.tape = tape
        self.op = op
        self.output = output
        self.parents = parents
        self.backward = backward


class GradTape:
    """
    Ruban de gradients, utilisé comme gestionnaire de contexte.

    Le ruban n'est pas partageable entre threads pendant l'enregistrement.
    """

    def __init__(self):
        self.nodes: List[TapeNode] = []

    def __enter__(self) -> "GradTape":
        _stack().append(self)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        _stack().remove(self)

    def record(self, op: str, output: Tensor, parents: Tuple[Tensor, ...],
               backward: BackwardRule) -> None:
        node = TapeNode(self, op, output, parents, backward)
        output.node = node
        self.nodes.append(node)

    def backward(self, root: Tensor, seed: Optional[np.ndarray] = None) -> None:
        """
        Rejouer les règles inverses depuis root et accumuler les gradients
        des feuilles (tenseurs requires_grad sans nœud).

        Args:
            root: Tenseur de sortie (scalaire en général)
            seed: Gradient initial, uns par défaut
        """
        grads: Dict[int, np.ndarray] = {
            id(root): np.ones_like(root.data) if seed is None else np.asarray(seed, root.data.dtype)
        }
        leaves: Dict[int, Tensor] = {}
        for node in reversed(self.nodes):
            grad_out = grads.pop(id(node.output), None)
            if grad_out is None:
                continue
            parent_grads = node.backward(grad_out)
            for parent, grad in zip(node.parents, parent_grads):
                if grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                grads[key] = grad if key not in grads else grads[key] + grad
                if parent.node is None:
                    leaves[key] = parent
        if root.node is None and root.requires_grad:
            leaves[id(root)] = root
        for key, leaf in leaves.items():
            grad = grads.get(key)
            if grad is None:
                continue
            grad = grad.astype(leaf.data.dtype, copy=False)
            leaf.grad = grad.copy() if leaf.grad is None else leaf.grad + grad
