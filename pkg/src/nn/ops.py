"""
Opérations différentiables sur Tensor

Chaque opération calcule sa sortie avec numpy puis, si un ruban est actif
et qu'un opérande requiert un gradient, enregistre sa règle inverse.

Opérations disponibles:
    - Arithmétique: add, sub, mul, matmul (par lots), broadcast_add
    - Structure: concat, gather_rows, reshape, transpose
    - Activations: relu, leaky_relu, softmax_lastdim
    - Réductions: reduce_max_with_indices, reduce_mean, reduce_sum
    - Perte: chamfer_l2_loss (Chamfer ℓ2 fusionnée vers une cible fixe)

Règles communes:
    - Le diffusionnement (broadcasting) numpy est accepté; les gradients
      sont réduits sur les axes diffusés
    - Une incompatibilité de formes lève ValidationError avec les deux
      formes dans le message
    - reduce_max_with_indices route le gradient vers le seul élément
      maximal (égalités: indice le plus petit)

Fichier: src/nn/ops.py
"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.nn.tensor import NumericError, Tensor, active_tape, current_dtype, nan_check_enabled
from src.utils.validators import ValidationError


Operand = Union[Tensor, float, int, np.ndarray]


def as_tensor(value: Operand) -> Tensor:
    """Envelopper une constante dans un Tensor sans gradient."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def _shape_error(op: str, left, right) -> ValidationError:
    return ValidationError(VALIDATION_MESSAGES["shape_mismatch"].format(
        op=op, left=tuple(np.shape(left)), right=tuple(np.shape(right))))


def unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Réduire un gradient diffusé vers la forme d'origine de l'opérande."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _emit(op: str, data: np.ndarray, parents: Tuple[Tensor, ...], backward) -> Tensor:
    """Créer la sortie d'une opération et l'enregistrer sur le ruban actif."""
    out = Tensor(data, dtype=current_dtype())
    if nan_check_enabled() and not np.all(np.isfinite(out.data)):
        raise NumericError(f"valeur non finie produite par {op}", op=op)
    tape = active_tape()
    if tape is not None and any(parent.requires_grad for parent in parents):
        out.requires_grad = True
        tape.record(op, out, parents, backward)
    return out


def _broadcast_shapes(op: str, a: Tensor, b: Tensor) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise _shape_error(op, a.data, b.data)


def add(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shapes("add", a, b)

    def backward(grad):
        return unbroadcast(grad, a.shape), unbroadcast(grad, b.shape)

    return _emit("add", a.data + b.data, (a, b), backward)


def sub(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shapes("sub", a, b)

    def backward(grad):
        return unbroadcast(grad, a.shape), unbroadcast(-grad, b.shape)

    return _emit("sub", a.data - b.data, (a, b), backward)


def mul(a: Operand, b: Operand) -> Tensor:
    """Produit terme à terme avec diffusionnement."""
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shapes("mul", a, b)

    def backward(grad):
        return unbroadcast(grad * b.data, a.shape), unbroadcast(grad * a.data, b.shape)

    return _emit("mul", a.data * b.data, (a, b), backward)


def broadcast_add(x: Operand, bias: Operand) -> Tensor:
    """Ajouter un biais (c,) à chaque ligne d'un tenseur (..., c)."""
    x, bias = as_tensor(x), as_tensor(bias)
    if bias.ndim != 1 or x.shape[-1:] != bias.shape:
        raise _shape_error("broadcast_add", x.data, bias.data)
    return add(x, bias)


def matmul(a: Operand, b: Operand) -> Tensor:
    """
    Produit matriciel, avec lots sur les axes de tête.

    Formes acceptées: (n, k) @ (k, m), (..., n, k) @ (..., k, m) et
    (..., n, k) @ (k, m).
    """
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise _shape_error("matmul", a.data, b.data)
    try:
        data = np.matmul(a.data, b.data)
    except ValueError:
        raise _shape_error("matmul", a.data, b.data)

    def backward(grad):
        grad_a = np.matmul(grad, np.swapaxes(b.data, -1, -2))
        grad_b = np.matmul(np.swapaxes(a.data, -1, -2), grad)
        return unbroadcast(grad_a, a.shape), unbroadcast(grad_b, b.shape)

    return _emit("matmul", data, (a, b), backward)


def concat(tensors: Sequence[Operand], axis: int = -1) -> Tensor:
    """Concaténer des tenseurs le long d'un axe."""
    tensors = tuple(as_tensor(t) for t in tensors)
    try:
        data = np.concatenate([t.data for t in tensors], axis=axis)
    except ValueError:
        raise _shape_error("concat", tensors[0].data, tensors[-1].data)
    sizes = [t.shape[axis] for t in tensors]
    bounds = np.cumsum(sizes)[:-1]

    def backward(grad):
        return tuple(np.split(grad, bounds, axis=axis))

    return _emit("concat", data, tensors, backward)


def gather_rows(x: Operand, indices) -> Tensor:
    """
    Rassembler des lignes: sortie[i...] = x[indices[i...]].

    Args:
        x: Tenseur (n, c)
        indices: Tableau d'entiers de forme quelconque, valeurs dans [0, n)

    Returns:
        Tensor de forme indices.shape + (c,)
    """
    x = as_tensor(x)
    indices = np.asarray(indices, dtype=np.int64)
    if x.ndim != 2:
        raise ValidationError(VALIDATION_MESSAGES["rank_invalid"].format(
            op="gather_rows", expected=2, shape=x.shape))
    if indices.size and (indices.min() < 0 or indices.max() >= x.shape[0]):
        raise _shape_error("gather_rows", x.data, indices)

    def backward(grad):
        full = np.zeros_like(x.data)
        np.add.at(full, indices.reshape(-1), grad.reshape(-1, x.shape[1]))
        return (full,)

    return _emit("gather_rows", x.data[indices], (x,), backward)


def reshape(x: Operand, shape: Sequence[int]) -> Tensor:
    x = as_tensor(x)
    try:
        data = x.data.reshape(tuple(shape))
    except ValueError:
        raise _shape_error("reshape", x.data, np.empty(tuple(abs(s) for s in shape)))

    def backward(grad):
        return (grad.reshape(x.shape),)

    return _emit("reshape", data, (x,), backward)


def transpose(x: Operand, axes: Optional[Sequence[int]] = None) -> Tensor:
    """Permuter les axes (inversion complète par défaut)."""
    x = as_tensor(x)
    axes = tuple(reversed(range(x.ndim))) if axes is None else tuple(axes)
    if sorted(axes) != list(range(x.ndim)):
        raise _shape_error("transpose", x.data, np.empty(len(axes)))
    inverse = tuple(np.argsort(axes))

    def backward(grad):
        return (np.transpose(grad, inverse),)

    return _emit("transpose", np.transpose(x.data, axes), (x,), backward)


def relu(x: Operand) -> Tensor:
    x = as_tensor(x)
    mask = x.data > 0

    def backward(grad):
        return (grad * mask,)

    return _emit("relu", np.where(mask, x.data, 0.0), (x,), backward)


def leaky_relu(x: Operand, slope: float = 0.2) -> Tensor:
    x = as_tensor(x)
    factor = np.where(x.data > 0, 1.0, slope).astype(x.data.dtype)

    def backward(grad):
        return (grad * factor,)

    return _emit("leaky_relu", x.data * factor, (x,), backward)


def softmax_lastdim(x: Operand) -> Tensor:
    """Softmax stable sur le dernier axe."""
    x = as_tensor(x)
    shifted = x.data - x.data.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=-1, keepdims=True)

    def backward(grad):
        inner = np.sum(grad * probs, axis=-1, keepdims=True)
        return (probs * (grad - inner),)

    return _emit("softmax", probs, (x,), backward)


def reduce_max_with_indices(x: Operand, axis: int = 0) -> Tuple[Tensor, np.ndarray]:
    """
    Maximum le long d'un axe et indices des éléments retenus.

    Le gradient est routé uniquement vers l'élément maximal; en cas
    d'égalité, l'indice le plus petit (premier rencontré) l'emporte.
    """
    x = as_tensor(x)
    axis = axis % x.ndim
    if x.shape[axis] == 0:
        raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])
    indices = np.argmax(x.data, axis=axis)
    values = np.take_along_axis(x.data, np.expand_dims(indices, axis), axis=axis).squeeze(axis)

    def backward(grad):
        full = np.zeros_like(x.data)
        np.put_along_axis(full, np.expand_dims(indices, axis), np.expand_dims(grad, axis), axis=axis)
        return (full,)

    return _emit("reduce_max", values, (x,), backward), indices


def reduce_sum(x: Operand, axis: Optional[int] = None) -> Tensor:
    x = as_tensor(x)

    def backward(grad):
        if axis is None:
            return (np.broadcast_to(grad, x.shape).copy(),)
        return (np.broadcast_to(np.expand_dims(grad, axis), x.shape).copy(),)

    return _emit("reduce_sum", np.sum(x.data, axis=axis), (x,), backward)


def reduce_mean(x: Operand, axis: Optional[int] = None) -> Tensor:
    x = as_tensor(x)
    count = x.data.size if axis is None else x.shape[axis]

    def backward(grad):
        if axis is None:
            return (np.broadcast_to(grad / count, x.shape).copy(),)
        return (np.broadcast_to(np.expand_dims(grad, axis) / count, x.shape).copy(),)

    return _emit("reduce_mean", np.mean(x.data, axis=axis), (x,), backward)


def chamfer_l2_loss(pred: Operand, target: np.ndarray) -> Tensor:
    """
    Chamfer ℓ2 différentiable entre une prédiction et une cible fixe.

    Valeur: moyenne sur pred des distances carrées au plus proche point de
    target, plus moyenne sur target des distances carrées au plus proche
    point de pred. Le gradient ne porte que sur pred.

    Args:
        pred: Tensor (n, 3)
        target: Tableau (m, 3)

    Returns:
        Tensor scalaire
    """
    pred = as_tensor(pred)
    target = np.asarray(target, dtype=pred.data.dtype)
    if pred.ndim != 2 or target.ndim != 2 or pred.shape[1] != target.shape[1]:
        raise _shape_error("chamfer_l2_loss", pred.data, target)
    if pred.shape[0] == 0 or target.shape[0] == 0:
        raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])
    diff = pred.data[:, None, :] - target[None, :, :]
    squared = np.sum(diff * diff, axis=2)
    to_target = np.argmin(squared, axis=1)
    to_pred = np.argmin(squared, axis=0)
    rows = np.arange(pred.shape[0])
    cols = np.arange(target.shape[0])
    value = squared[rows, to_target].mean() + squared[to_pred, cols].mean()

    def backward(grad):
        full = 2.0 * (pred.data - target[to_target]) / pred.shape[0]
        np.add.at(full, to_pred, 2.0 * (pred.data[to_pred] - target) / target.shape[0])
        return (full * grad,)

    return _emit("chamfer_l2", np.asarray(value), (pred,), backward)
