"""
Couches neuronales - Paramètres, MLP partagé, attention, EdgeConv, set abstraction

Ce module assemble les opérations de src/nn/ops.py en couches
réutilisables par le générateur SPAC-Net. Chaque couche déclare ses
paramètres dans un ParamStore sous un préfixe nommé puis les relit à
chaque appel; le ParamStore porte aussi l'état de l'optimiseur.

Couches:
    - Linear: x·W + b (biais facultatif)
    - SharedMLP: suite de Linear appliquée point par point, ReLU (ou
      Leaky-ReLU) entre les couches, dernière couche linéaire
    - max_pool_set: maximum par canal sur l'ensemble des lignes
    - MultiHeadAttention: attention produit scalaire normalisée par √d,
      têtes concaténées puis projetées par W_o, sans biais
    - EdgeConv: caractéristiques d'arête [ancre ‖ voisin − ancre], MLP,
      Leaky-ReLU 0.2, maximum sur les k voisins
    - SetAbstraction: centres (FPS ou imposés), groupes de k voisins,
      MLP sur [position relative ‖ caractéristique], maximum par groupe,
      puis une couche d'auto-attention résiduelle

Initialisation:
    Poids uniformes dans ±1/√fan_in tirés d'un générateur à graine,
    biais nuls. L'ordre de déclaration des couches fixe donc les valeurs.

Fichier: src/nn/layers.py
"""

import math
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.nn import ops
from src.nn.tensor import Tensor
from src.services.geometry_service import farthest_point_indices, knn_groups
from src.utils.validators import DataValidator, ValidationError


class ParamStore:
    """
    Registre ordonné des paramètres nommés et de l'état de l'optimiseur.

    Attributes:
        first_moment: Moments d'ordre 1 par paramètre (AdamW)
        second_moment: Moments d'ordre 2 par paramètre (AdamW)
        step: Nombre de pas d'optimisation effectués
    """

    def __init__(self, seed: int = 0):
        self._params: Dict[str, Tensor] = {}
        self._rng = np.random.default_rng(DataValidator.validate_positive_int(seed, "seed", minimum=0))
        self.first_moment: Dict[str, np.ndarray] = {}
        self.second_moment: Dict[str, np.ndarray] = {}
        self.step = 0

    def create(self, name: str, shape: Sequence[int], fan_in: Optional[int] = None) -> Tensor:
        """
        Déclarer un paramètre.

        Args:
            name: Nom unique
            shape: Forme du paramètre
            fan_in: Fan-in de l'initialisation uniforme; None pour un biais
                (initialisé à zéro)

        Raises:
            ValidationError: Si le nom existe déjà
        """
        if name in self._params:
            raise ValidationError(VALIDATION_MESSAGES["parameter_duplicate"].format(name=name))
        if fan_in is None:
            data = np.zeros(tuple(shape), dtype=np.float32)
        else:
            bound = 1.0 / math.sqrt(fan_in)
            data = self._rng.uniform(-bound, bound, size=tuple(shape)).astype(np.float32)
        tensor = Tensor(data, requires_grad=True, name=name, dtype=np.float32)
        self._params[name] = tensor
        self.first_moment[name] = np.zeros_like(data)
        self.second_moment[name] = np.zeros_like(data)
        return tensor

    def __getitem__(self, name: str) -> Tensor:
        if name not in self._params:
            raise ValidationError(VALIDATION_MESSAGES["parameter_unknown"].format(name=name))
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __iter__(self) -> Iterator[str]:
        return iter(self._params)

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> List[str]:
        return list(self._params)

    def parameters(self) -> List[Tensor]:
        return list(self._params.values())

    def items(self):
        return self._params.items()

    @property
    def parameter_count(self) -> int:
        return int(sum(t.data.size for t in self._params.values()))

    def zero_grad(self) -> None:
        for tensor in self._params.values():
            tensor.grad = None

    def zero(self, *prefixes: str) -> None:
        """Mettre à zéro les paramètres dont le nom commence par un préfixe."""
        for name, tensor in self._params.items():
            if any(name.startswith(prefix) for prefix in prefixes):
                tensor.data[...] = 0.0

    def cast(self, dtype) -> None:
        """Convertir les paramètres en place (float64 pour les vérifications)."""
        for tensor in self._params.values():
            tensor.data = tensor.data.astype(dtype)

    def arrays(self) -> Dict[str, np.ndarray]:
        return {name: tensor.data for name, tensor in self._params.items()}

    def load_arrays(self, arrays: Dict[str, np.ndarray]) -> None:
        """Remplacer les valeurs des paramètres (mêmes noms, mêmes formes)."""
        for name, tensor in self._params.items():
            value = arrays.get(name)
            if value is None or tuple(value.shape) != tensor.shape:
                raise ValidationError(VALIDATION_MESSAGES["gradients_misaligned"].format(name=name))
            tensor.data = np.array(value, dtype=tensor.data.dtype)


class Linear:
    """Couche affine x·W + b appliquée sur le dernier axe."""

    def __init__(self, store: ParamStore, prefix: str, in_dim: int, out_dim: int, bias: bool = True):
        self.store = store
        self.weight_name = f"{prefix}.weight"
        self.bias_name = f"{prefix}.bias" if bias else None
        store.create(self.weight_name, (in_dim, out_dim), fan_in=in_dim)
        if bias:
            store.create(self.bias_name, (out_dim,))
        self.in_dim = in_dim
        self.out_dim = out_dim

    def __call__(self, x: Tensor) -> Tensor:
        if x.shape[-1] != self.in_dim:
            raise ValidationError(VALIDATION_MESSAGES["shape_mismatch"].format(
                op=self.weight_name, left=x.shape, right=(self.in_dim, self.out_dim)))
        out = ops.matmul(x, self.store[self.weight_name])
        if self.bias_name is not None:
            out = ops.broadcast_add(out, self.store[self.bias_name])
        return out


class SharedMLP:
    """
    MLP partagé point par point.

    Args:
        store: Registre des paramètres
        prefix: Préfixe des noms de paramètres
        widths: Largeurs [entrée, cachées..., sortie], au moins deux valeurs
        slope: Pente négative de l'activation (0 pour ReLU)
    """

    def __init__(self, store: ParamStore, prefix: str, widths: Sequence[int], slope: float = 0.0):
        if len(widths) < 2:
            raise ValidationError(VALIDATION_MESSAGES["widths_empty"])
        self.widths = [DataValidator.validate_positive_int(w, "width") for w in widths]
        self.slope = slope
        self.layers = [Linear(store, f"{prefix}.{index}", widths[index], widths[index + 1])
                       for index in range(len(widths) - 1)]

    @property
    def last(self) -> Linear:
        return self.layers[-1]

    def __call__(self, x: Tensor) -> Tensor:
        for index, layer in enumerate(self.layers):
            x = layer(x)
            if index < len(self.layers) - 1:
                x = ops.relu(x) if self.slope == 0.0 else ops.leaky_relu(x, self.slope)
        return x


def max_pool_set(x: Tensor) -> Tensor:
    """Maximum par canal sur l'axe des lignes d'un tenseur (n, c)."""
    values, _ = ops.reduce_max_with_indices(x, axis=0)
    return values


class MultiHeadAttention:
    """
    Attention multi-têtes produit scalaire.

    Args:
        store: Registre des paramètres
        prefix: Préfixe des noms
        dim: Largeur des requêtes et de la sortie
        heads: Nombre de têtes, diviseur de dim
        kv_dim: Largeur des clés/valeurs en entrée (défaut: dim)
    """

    def __init__(self, store: ParamStore, prefix: str, dim: int, heads: int,
                 kv_dim: Optional[int] = None):
        heads = DataValidator.validate_positive_int(heads, "heads")
        if dim % heads:
            raise ValidationError(VALIDATION_MESSAGES["heads_divisibility"].format(dim=dim, heads=heads))
        kv_dim = dim if kv_dim is None else kv_dim
        self.store = store
        self.dim = dim
        self.heads = heads
        self.head_dim = dim // heads
        self.query = Linear(store, f"{prefix}.w_q", dim, dim, bias=False)
        self.key = Linear(store, f"{prefix}.w_k", kv_dim, dim, bias=False)
        self.value = Linear(store, f"{prefix}.w_v", kv_dim, dim, bias=False)
        self.output = Linear(store, f"{prefix}.w_o", dim, dim, bias=False)

    def _split(self, x: Tensor) -> Tensor:
        rows = x.shape[0]
        return ops.transpose(ops.reshape(x, (rows, self.heads, self.head_dim)), (1, 0, 2))

    def attention_weights(self, q: Tensor, k: Tensor) -> Tensor:
        """Poids d'attention (têtes, n_q, n_k)."""
        scores = ops.matmul(self._split(self.query(q)),
                            ops.transpose(self._split(self.key(k)), (0, 2, 1)))
        return ops.softmax_lastdim(ops.mul(scores, 1.0 / math.sqrt(self.head_dim)))

    def __call__(self, q: Tensor, k: Tensor, v: Tensor) -> Tensor:
        if k.shape[0] != v.shape[0]:
            raise ValidationError(VALIDATION_MESSAGES["shape_mismatch"].format(
                op="attention", left=k.shape, right=v.shape))
        weights = self.attention_weights(q, k)
        heads = ops.matmul(weights, self._split(self.value(v)))
        merged = ops.reshape(ops.transpose(heads, (1, 0, 2)), (q.shape[0], self.dim))
        return self.output(merged)


class EdgeConv:
    """
    Convolution d'arêtes sur un graphe de k plus proches voisins.

    Le voisinage de chaque ancre est calculé sur les lignes de l'ensemble
    de recherche (coordonnées ou caractéristiques selon l'appelant).
    """

    def __init__(self, store: ParamStore, prefix: str, in_dim: int, widths: Sequence[int],
                 k: int, slope: float = 0.2):
        self.k = DataValidator.validate_positive_int(k, "k")
        self.slope = slope
        self.mlp = SharedMLP(store, f"{prefix}.mlp", [2 * in_dim] + list(widths), slope=slope)

    def edge_features(self, points: Tensor, anchors: Tensor,
                      neighbors: Optional[np.ndarray] = None) -> Tensor:
        """Caractéristiques [ancre ‖ voisin − ancre] de forme (m, k, 2c)."""
        k = DataValidator.validate_range_int(self.k, "k", 1, points.shape[0])
        if neighbors is None:
            neighbors = knn_groups(points.data, anchors.data, k)
        repeated = np.repeat(np.arange(anchors.shape[0])[:, None], neighbors.shape[1], axis=1)
        anchor_rows = ops.gather_rows(anchors, repeated)
        return ops.concat([anchor_rows, ops.sub(ops.gather_rows(points, neighbors), anchor_rows)], axis=-1)

    def __call__(self, points: Tensor, anchors: Tensor,
                 neighbors: Optional[np.ndarray] = None) -> Tensor:
        """
        Args:
            points: Ensemble de recherche (n, c)
            anchors: Ancres (m, c)
            neighbors: Indices (m, k) imposés, sinon kNN sur les données

        Returns:
            Tensor (m, c_out)

        Raises:
            ValidationError: Si k > n
        """
        edges = ops.leaky_relu(self.mlp(self.edge_features(points, anchors, neighbors)), self.slope)
        pooled, _ = ops.reduce_max_with_indices(edges, axis=1)
        return pooled


class SetAbstraction:
    """
    Set abstraction avec auto-attention résiduelle.

    Args:
        store: Registre des paramètres
        prefix: Préfixe des noms
        in_dim: Largeur des caractéristiques d'entrée
        widths: Largeurs du MLP après [3 + in_dim]
        k: Taille des groupes
        heads: Têtes de l'auto-attention
    """

    def __init__(self, store: ParamStore, prefix: str, in_dim: int, widths: Sequence[int],
                 k: int, heads: int):
        self.k = DataValidator.validate_positive_int(k, "k")
        self.mlp = SharedMLP(store, f"{prefix}.mlp", [3 + in_dim] + list(widths))
        self.attention = MultiHeadAttention(store, f"{prefix}.attn", widths[-1], heads)

    def __call__(self, points: np.ndarray, feats: Tensor, m: Optional[int] = None,
                 centers: Optional[np.ndarray] = None) -> Tuple[np.ndarray, Tensor]:
        """
        Args:
            points: Coordonnées (n, 3)
            feats: Caractéristiques (n, c)
            m: Nombre de centres choisis par FPS (indice de départ 0)
            centers: Centres imposés (m, 3), prioritaires sur m

        Returns:
            Tuple (centres (m, 3), caractéristiques (m, c_out))

        Raises:
            ValidationError: Si m ou k dépassent n
        """
        points = np.asarray(points, dtype=np.float64)
        count = points.shape[0]
        if centers is None:
            m = DataValidator.validate_range_int(m, "m", 1, count)
            centers = points[farthest_point_indices(points, m, 0)]
        k = DataValidator.validate_range_int(self.k, "k", 1, count)
        groups = knn_groups(points, centers, k)
        relative = Tensor(points[groups] - centers[:, None, :])
        grouped = ops.concat([relative, ops.gather_rows(feats, groups)], axis=-1)
        pooled, _ = ops.reduce_max_with_indices(self.mlp(grouped), axis=1)
        return centers, ops.add(pooled, self.attention(pooled, pooled, pooled))
