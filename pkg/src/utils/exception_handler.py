"""
Gestionnaire global des exceptions pour SPAC-Net desk

Ce module fournit la gestion des exceptions avec intégration Sentry,
gestionnaire global et correspondance entre erreurs métier et codes de
sortie de la ligne de commande.

Codes de sortie:
    - 0: succès
    - 1: ValidationError (paramètre invalide)
    - 2: PointFileError (fichier absent, illisible ou non inscriptible)
    - 3: PointFileParseError (contenu invalide, avec numéro de ligne)
    - 4: NumericError (NaN ou Inf, entraînement interrompu)

Fonctionnalités principales:
    - Gestionnaire global pour exceptions non capturées
    - Exécution d'une commande CLI avec message, code de sortie et envoi
      des événements Sentry en attente (run_command)

Fichier: src/utils/exception_handler.py
"""

import sys
import traceback
from typing import Any, Callable, Optional

from rich.console import Console

from src.config.messages import GENERAL_MESSAGES
from src.nn.tensor import NumericError
from src.services.logging_service import logger
from src.utils.point_io import PointFileError, PointFileParseError
from src.utils.validators import ValidationError


EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_PARSE = 3
EXIT_NUMERIC = 4


class ExceptionHandler:
    """
    Gestionnaire global des exceptions de l'application.

    Responsabilités:
        - Installation d'un sys.excepthook journalisant les erreurs
        - Traduction des erreurs métier en message et code de sortie
    """

    @staticmethod
    def setup_global_exception_handler():
        """
        Installer un gestionnaire pour les exceptions non capturées.

        KeyboardInterrupt garde le comportement par défaut; les autres
        exceptions sont journalisées avec leur trace puis affichées.
        """
        def exception_handler(exc_type, exc_value, exc_traceback):
            if issubclass(exc_type, KeyboardInterrupt):
                sys.__excepthook__(exc_type, exc_value, exc_traceback)
                return

            context = {
                'exception_type': exc_type.__name__,
                'traceback': ''.join(traceback.format_exception(
                    exc_type, exc_value, exc_traceback
                )),
                'global_exception': True,
                'handled_by': 'global_exception_handler'
            }
            logger.log_exception(exc_value, context)

            print(f"\n❌ {GENERAL_MESSAGES['unexpected_error'].format(error=exc_value)}")
            sys.__excepthook__(exc_type, exc_value, exc_traceback)

        sys.excepthook = exception_handler

    @staticmethod
    def exit_code_for(exc: BaseException) -> int:
        """Code de sortie associé à une exception (1 par défaut)."""
        if isinstance(exc, PointFileParseError):
            return EXIT_PARSE
        if isinstance(exc, PointFileError):
            return EXIT_IO
        if isinstance(exc, NumericError):
            return EXIT_NUMERIC
        return EXIT_VALIDATION

    @staticmethod
    def error_message(exc: BaseException) -> str:
        """Message utilisateur français selon la famille d'erreur."""
        if isinstance(exc, PointFileParseError):
            key = 'parse_error'
        elif isinstance(exc, PointFileError):
            key = 'file_error'
        elif isinstance(exc, NumericError):
            key = 'numeric_error'
        elif isinstance(exc, ValidationError):
            key = 'validation_error'
        else:
            key = 'unexpected_error'
        return GENERAL_MESSAGES[key].format(error=exc)

    @staticmethod
    def run_command(func: Callable, *args, console: Optional[Console] = None, **kwargs) -> Any:
        """
        Exécuter une commande CLI et sortir avec le code approprié en cas d'erreur.

        Les erreurs métier (validation, fichier, lecture, numérique) sont
        journalisées, affichées sur une ligne et converties en sys.exit.
        Les autres exceptions sont relancées vers le gestionnaire global.
        Les événements Sentry en attente sont envoyés dans tous les cas.

        Raises:
            SystemExit: Code 1 à 4 selon la famille d'erreur
        """
        try:
            return func(*args, **kwargs)
        except (ValidationError, PointFileError, NumericError) as e:
            logger.log_exception(e, {
                'function_name': getattr(func, '__name__', 'unknown'),
                'exit_code': ExceptionHandler.exit_code_for(e),
            })
            (console or Console(stderr=True)).print(
                f"[bold red]❌ {ExceptionHandler.error_message(e)}[/bold red]")
            sys.exit(ExceptionHandler.exit_code_for(e))
        finally:
            logger.force_flush()
