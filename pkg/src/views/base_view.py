"""
Vue de base pour l'interface CLI SPAC-Net desk

Ce module fournit la classe BaseView qui sert de fondation pour toutes les
vues de l'application: affichage Rich uniforme, sortie JSON et exécution
des commandes avec conversion des erreurs en codes de sortie.

Architecture de présentation:
    1. Interface unifiée: classe de base pour toutes les vues de commande
    2. Rich Integration: tableaux, panneaux, règles et barres de progression
    3. Mode JSON: --json remplace tout affichage décoratif par un document
       JSON unique sur la sortie standard
    4. Codes de sortie: chaque commande passe par ExceptionHandler.run_command

Composants Rich utilisés:
    - Console: affichage principal avec support couleurs
    - Table: présentation tabulaire des métriques
    - Panel: encadrement des résumés (boîte de succès)
    - Progress: barres de progression (désactivées en mode JSON)

Patterns d'affichage:
    - Messages typés: succès (vert), erreur (rouge), warning (jaune), info (bleu)
    - Headers formatés: titres de sections avec règle horizontale
    - Tableaux uniformes: colonnes alignées et styles cohérents

Fichier: src/views/base_view.py
"""

import json
from contextlib import nullcontext
from typing import Any, Callable

import click
from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn
from rich.table import Table
from rich.text import Text

from src.utils.exception_handler import ExceptionHandler


class BaseView:
    """
    Classe de base pour toutes les vues CLI.

    Attributs:
        console: Instance Rich Console pour affichage
        json_output: Si True, seuls les documents JSON sont écrits
    """

    def __init__(self, json_output: bool = False):
        self.console = Console()
        self.json_output = json_output

    def run(self, func: Callable, *args, **kwargs) -> Any:
        """
        Exécuter le corps d'une commande avec les codes de sortie du projet.

        Raises:
            SystemExit: Code 1 à 4 sur erreur métier
        """
        return ExceptionHandler.run_command(func, *args, **kwargs)

    def display_success(self, message: str):
        """Afficher un message de succès (vert, icône check)."""
        if not self.json_output:
            self.console.print(f"[bold green]✓ {message}[/bold green]")

    def display_warning(self, message: str):
        if not self.json_output:
            self.console.print(f"[bold yellow]⚠ {message}[/bold yellow]")

    def display_info(self, message: str):
        if not self.json_output:
            self.console.print(f"[bold blue]ℹ {message}[/bold blue]")

    def display_table(self, title: str, columns: list, data: list,
                      style: str = "cyan"):
        """
        Afficher un tableau stylé avec données structurées.

        Args:
            title: Titre du tableau
            columns: Définitions de colonnes (name obligatoire, style et
                justify optionnels)
            data: Données à afficher (liste de listes)
            style: Style de couleur du tableau (défaut: cyan)
        """
        if self.json_output:
            return
        table = Table(title=title, style=style, box=box.ROUNDED)
        for column in columns:
            table.add_column(column['name'], style=column.get('style', 'white'),
                             justify=column.get('justify', 'left'))
        for row in data:
            table.add_row(*[str(cell) for cell in row])
        self.console.print(table)

    def display_json(self, data: Any):
        """Écrire un document JSON (clés triées) sur la sortie standard."""
        click.echo(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))

    @staticmethod
    def format_value(value, digits: int = 3) -> str:
        """Valeur numérique formatée, tiret si absente."""
        return "-" if value is None else f"{value:.{digits}f}"

    def progress(self) -> Progress:
        """Barre de progression Rich, désactivée en mode JSON."""
        return Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TextColumn("{task.completed}/{task.total}"),
            console=self.console,
            disable=self.json_output,
        )

    def status(self, message: str):
        """Indicateur d'attente Rich (aucun affichage en mode JSON)."""
        return nullcontext() if self.json_output else self.console.status(message)

    def show_progress(self, tasks: list, description: str):
        """
        Itérer sur des tâches en affichant une barre de progression.

        Yields:
            Items de la liste tasks un par un avec progression
        """
        with self.progress() as progress:
            task = progress.add_task(description, total=len(tasks))
            for item in tasks:
                yield item
                progress.advance(task)

    def display_header(self, title: str):
        """Afficher un en-tête (règle magenta) pour délimiter les sections."""
        if self.json_output:
            return
        header_text = Text(title, style="bold magenta")
        self.console.print()
        self.console.rule(header_text, style="magenta")
        self.console.print()

    def display_success_box(self, title: str, content: str):
        """Afficher une boîte de succès"""
        if self.json_output:
            return
        panel = Panel(
            content,
            title=f"[bold green]{title}[/bold green]",
            style="green",
            border_style="green",
            box=box.ROUNDED
        )
        self.console.print(panel)
