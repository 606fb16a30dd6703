"""
Dérivation de graines reproductibles

La graine globale d'une expérience est éclatée en graines par échantillon
au moyen des clés de dérivation de numpy.random.SeedSequence: chaque
échantillon est identifié par un tuple de compteurs (forme, split, vue,
difficulté). Ajouter des échantillons ne modifie donc jamais les graines
des échantillons existants.

Fichier: src/utils/seed_utils.py
"""

import numpy as np

from src.utils.validators import DataValidator


def derive_seed(global_seed: int, *keys: int) -> int:
    """
    Dériver une graine 63 bits à partir de la graine globale et de clés.

    Args:
        global_seed: Graine de l'expérience (entier ≥ 0)
        *keys: Compteurs identifiant l'échantillon

    Returns:
        int: Graine dérivée dans [0, 2**63)
    """
    global_seed = DataValidator.validate_positive_int(global_seed, "seed", minimum=0)
    spawn_key = tuple(DataValidator.validate_positive_int(key, "key", minimum=0) for key in keys)
    sequence = np.random.SeedSequence(entropy=global_seed, spawn_key=spawn_key)
    return int(sequence.generate_state(1, dtype=np.uint64)[0]) // 2


def make_rng(global_seed: int, *keys: int) -> np.random.Generator:
    """Générateur numpy initialisé avec derive_seed."""
    return np.random.default_rng(derive_seed(global_seed, *keys))
