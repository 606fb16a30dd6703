"""
Système de validation des paramètres pour SPAC-Net desk

Ce module fournit la validation centralisée des paramètres numériques et
structurels manipulés par le pipeline de complétion: tailles de nuages,
rayons, fractions, seuils, formes de tenseurs et valeurs d'énumérations.

Architecture de validation:
    1. Validation structurelle: types, formes de tableaux, tailles
    2. Validation numérique: bornes, finitude, positivité
    3. Feedback utilisateur: messages explicites et localisés

Composants principaux:
    - ValidationError: Exception unique pour toute erreur de paramètre
      (code de sortie 1 en ligne de commande)
    - DataValidator: Méthodes statiques de validation spécialisées

Utilisation:
    Chaque opération publique valide ses préconditions en début d'appel
    et lève ValidationError avec un message issu de VALIDATION_MESSAGES.

Fichier: src/utils/validators.py
"""

import math
from enum import Enum
from typing import Sequence, Type, TypeVar

import numpy as np

from src.config.messages import VALIDATION_MESSAGES


E = TypeVar("E", bound=Enum)


class ValidationError(Exception):
    """
    Exception spécialisée pour les erreurs de paramètres.

    Levée lorsqu'une valeur ne respecte pas les préconditions d'une
    opération (taille hors bornes, rayon négatif, formes incompatibles...).
    Elle est distincte des erreurs d'entrée/sortie et des échecs numériques
    afin que la ligne de commande puisse retourner un code de sortie dédié.
    """
    pass


class DataValidator:
    """
    Classe centrale pour la validation des paramètres du pipeline.

    Toutes les méthodes sont statiques, retournent la valeur normalisée
    et lèvent ValidationError en cas de violation.
    """

    @staticmethod
    def validate_positive_int(value, name: str, minimum: int = 1) -> int:
        """
        Valider un entier supérieur ou égal à un minimum.

        Args:
            value: Valeur à valider
            name: Nom du paramètre pour le message d'erreur
            minimum: Borne inférieure incluse (défaut: 1)

        Returns:
            int: Valeur convertie

        Raises:
            ValidationError: Si la valeur n'est pas entière ou trop petite
        """
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise ValidationError(
                VALIDATION_MESSAGES["integer_required"].format(name=name, value=value)
            )
        if value < minimum:
            raise ValidationError(
                VALIDATION_MESSAGES["integer_too_small"].format(
                    name=name, value=value, minimum=minimum
                )
            )
        return int(value)

    @staticmethod
    def validate_range_int(value, name: str, low: int, high: int) -> int:
        """Valider un entier dans l'intervalle fermé [low, high]."""
        value = DataValidator.validate_positive_int(value, name, minimum=low)
        if value > high:
            raise ValidationError(
                VALIDATION_MESSAGES["integer_out_of_range"].format(
                    name=name, value=value, low=low, high=high
                )
            )
        return value

    @staticmethod
    def validate_positive_real(value, name: str) -> float:
        """
        Valider un réel strictement positif et fini.

        Raises:
            ValidationError: Si la valeur est non finie ou ≤ 0
        """
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ValidationError(
                VALIDATION_MESSAGES["real_required"].format(name=name, value=value)
            )
        if not math.isfinite(value) or value <= 0.0:
            raise ValidationError(
                VALIDATION_MESSAGES["real_not_positive"].format(name=name, value=value)
            )
        return value

    @staticmethod
    def validate_open_unit_interval(value, name: str) -> float:
        """
        Valider un réel dans l'intervalle ouvert (0, 1).

        Utilisé pour les fractions de masquage et le seuil cosinus δ.
        """
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ValidationError(
                VALIDATION_MESSAGES["real_required"].format(name=name, value=value)
            )
        if not (0.0 < value < 1.0):
            raise ValidationError(
                VALIDATION_MESSAGES["open_unit_interval"].format(name=name, value=value)
            )
        return value

    @staticmethod
    def validate_non_negative_real(value, name: str) -> float:
        """Valider un réel fini supérieur ou égal à zéro."""
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ValidationError(
                VALIDATION_MESSAGES["real_required"].format(name=name, value=value)
            )
        if not math.isfinite(value) or value < 0.0:
            raise ValidationError(
                VALIDATION_MESSAGES["real_negative"].format(name=name, value=value)
            )
        return value

    @staticmethod
    def validate_points_array(points, name: str = "points") -> np.ndarray:
        """
        Valider et normaliser un tableau de points 3D.

        Args:
            points: Tableau convertible en ndarray de forme (n, 3)
            name: Nom du paramètre

        Returns:
            np.ndarray: Copie float64 contiguë de forme (n, 3)

        Raises:
            ValidationError: Si la forme est incorrecte ou si une
                coordonnée est NaN/Inf
        """
        array = np.array(points, dtype=np.float64)
        if array.size == 0:
            return np.zeros((0, 3), dtype=np.float64)
        if array.ndim != 2 or array.shape[1] != 3:
            raise ValidationError(
                VALIDATION_MESSAGES["points_shape"].format(name=name, shape=array.shape)
            )
        if not np.all(np.isfinite(array)):
            raise ValidationError(VALIDATION_MESSAGES["points_not_finite"].format(name=name))
        return np.ascontiguousarray(array)

    @staticmethod
    def validate_index(index, count: int, name: str = "index") -> int:
        """Valider un indice entier dans [0, count)."""
        if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
            raise ValidationError(
                VALIDATION_MESSAGES["integer_required"].format(name=name, value=index)
            )
        if not 0 <= index < count:
            raise ValidationError(
                VALIDATION_MESSAGES["index_out_of_range"].format(
                    name=name, value=index, count=count
                )
            )
        return int(index)

    @staticmethod
    def validate_same_length(first: Sequence, second: Sequence,
                             first_name: str, second_name: str) -> None:
        """Vérifier que deux séquences ont la même longueur (lignes alignées)."""
        if len(first) != len(second):
            raise ValidationError(
                VALIDATION_MESSAGES["misaligned"].format(
                    first=first_name, first_len=len(first),
                    second=second_name, second_len=len(second),
                )
            )

    @staticmethod
    def validate_enum(value, enum_class: Type[E], name: str) -> E:
        """
        Valider et convertir une valeur d'énumération.

        Accepte une instance de l'énumération ou sa valeur textuelle
        (insensible à la casse, tirets acceptés pour les soulignés).

        Raises:
            ValidationError: Si la valeur ne correspond à aucun membre
        """
        if isinstance(value, enum_class):
            return value
        text = str(value).strip().lower().replace("-", "_")
        for member in enum_class:
            if member.value == text or member.name.lower() == text:
                return member
        allowed = ", ".join(member.value for member in enum_class)
        raise ValidationError(
            VALIDATION_MESSAGES["enum_invalid"].format(name=name, value=value, allowed=allowed)
        )
