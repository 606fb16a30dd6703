import rich_click as click
from rich.console import Console
from src.config.messages import GENERAL_MESSAGES
from src.database.connection import engine
from src.database.init_db import init_database
from src.views.ablation_view import AblationView
from src.views.dataset_view import DatasetView
from src.views.evaluation_view import EvaluationView
from src.views.interface_view import InterfaceView
from src.views.training_view import TrainingView
from src.utils.exception_handler import ExceptionHandler, EXIT_IO
from dotenv import load_dotenv

# Configuration Rich-Click
click.rich_click.USE_RICH_MARKUP = True
click.rich_click.USE_MARKDOWN = True
click.rich_click.SHOW_ARGUMENTS = True
click.rich_click.GROUP_ARGUMENTS_OPTIONS = True
click.rich_click.STYLE_ERRORS_SUGGESTION = "magenta italic"
click.rich_click.ERRORS_SUGGESTION = (
    "Essayez 'python spacnet.py --help' pour plus d'informations."
)

console = Console()

MODES = click.Choice(['occlusion', 'edges', 'downsampled'], case_sensitive=False)
FORMATS = click.Choice(['ply', 'xyz'], case_sensitive=False)


def manifest_option(func):
    return click.option('--manifest', 'manifest_path', type=click.Path(dir_okay=False),
                        help="Manifeste JSON d'expérience (défauts si absent)")(func)


def seed_option(func):
    return click.option('--seed', type=click.IntRange(min=0),
                        help='Graine globale (remplace celle du manifeste)')(func)


def json_option(func):
    return click.option('--json', 'json_output', is_flag=True,
                        help='Sortie JSON au lieu des tableaux')(func)


def interface_options(func):
    func = click.option('--radius', type=float, help='Rayon r du voisinage (mode edges)')(func)
    func = click.option('--delta', type=float, help='Seuil cosinus δ (mode edges)')(func)
    func = click.option('--mode', type=MODES, help="Mode de localisation de l'interface")(func)
    return func


@click.group()
def cli():
    """SPAC-Net desk - Complétion de nuages de points par interface

    Génération de scans partiels, localisation de l'interface, entraînement,
    complétion et évaluation, le tout reproductible depuis un manifeste.
    """
    # Charger les variables d'environnement au démarrage
    load_dotenv()

    # Configurer le gestionnaire global d'exceptions
    ExceptionHandler.setup_global_exception_handler()


# === JEUX DE DONNÉES ===
@cli.command()
@manifest_option
@seed_option
@click.option('--out', 'output_dir', type=click.Path(file_okay=False),
              help='Dossier de sortie (remplace output_dir)')
@json_option
def synth(manifest_path, seed, output_dir, json_output):
    """Générer le jeu de données synthétique (splits train et test)"""
    DatasetView(json_output).synth_command(manifest_path, seed, output_dir)


# === INTERFACE ===
@cli.command()
@click.argument('input_file', type=click.Path(dir_okay=False))
@interface_options
@click.option('--n-t', 'n_t', type=int, help="Taille de l'interface (modes occlusion et downsampled)")
@click.option('--occlusion', help="Point d'occlusion 'x,y,z' (mode occlusion)")
@click.option('--out', 'output', type=click.Path(dir_okay=False), help='Fichier de sortie')
@click.option('--format', 'fmt', type=FORMATS, default='ply', show_default=True)
@json_option
def interface(input_file, mode, delta, radius, n_t, occlusion, output, fmt, json_output):
    """Localiser l'interface d'un scan partiel et écrire un nuage étiqueté"""
    InterfaceView(json_output).interface_command(
        input_file, mode, n_t, delta, radius, occlusion, output, fmt.lower())


# === ENTRAÎNEMENT ===
@cli.command()
@manifest_option
@seed_option
@click.option('--out', 'output_dir', type=click.Path(file_okay=False),
              help='Dossier de sortie (remplace output_dir)')
@click.option('--epochs', type=click.IntRange(min=1), help="Nombre d'époques")
@json_option
def train(manifest_path, seed, output_dir, epochs, json_output):
    """Entraîner SPAC-Net sur le split train du jeu de données"""
    TrainingView(json_output).train_command(manifest_path, seed, output_dir, epochs)


@cli.command()
@click.argument('checkpoint', type=click.Path(dir_okay=False))
@click.argument('input_file', type=click.Path(dir_okay=False))
@interface_options
@click.option('--occlusion', help="Point d'occlusion 'x,y,z' (mode occlusion)")
@click.option('--out', 'output', type=click.Path(dir_okay=False), help='Fichier de sortie')
@click.option('--format', 'fmt', type=FORMATS, default='ply', show_default=True)
@json_option
def complete(checkpoint, input_file, mode, delta, radius, occlusion, output, fmt, json_output):
    """Compléter un scan partiel avec un checkpoint"""
    TrainingView(json_output).complete_command(
        checkpoint, input_file, mode, delta, radius, occlusion, output, fmt.lower())


# === ÉVALUATION ===
@cli.command('eval')
@click.argument('checkpoint', type=click.Path(dir_okay=False))
@manifest_option
@seed_option
@click.option('--dataset', 'dataset_dir', type=click.Path(file_okay=False),
              help='Jeu de données (défaut: <output_dir>/dataset)')
@click.option('--split', type=click.Choice(['train', 'test']), default='test', show_default=True)
@click.option('--out', 'output_dir', type=click.Path(file_okay=False),
              help='Dossier du rapport JSON')
@interface_options
@click.option('--workers', type=click.IntRange(min=1), help="Threads de calcul des métriques")
@click.option('--record', is_flag=True, help='Enregistrer le résultat dans le registre')
@json_option
def evaluate(checkpoint, manifest_path, seed, dataset_dir, split, output_dir, mode, delta,
             radius, workers, record, json_output):
    """Évaluer un checkpoint (CD-S/M/H/Avg, F-Score@1%, Fidelity, MMD)"""
    EvaluationView(json_output).eval_command(
        checkpoint, manifest_path, dataset_dir, split, seed, output_dir, mode, delta, radius,
        workers, record)


@cli.command()
@click.option('--study', type=click.Choice(['interface', 'ssp', 'delta']), required=True)
@manifest_option
@seed_option
@click.option('--seeds', type=click.IntRange(min=1), default=3, show_default=True,
              help='Nombre de graines successives')
@click.option('--epochs', type=click.IntRange(min=1), help="Époques par variante")
@click.option('--radius', type=float, help='Rayon r (étude delta)')
@json_option
def ablate(study, manifest_path, seed, seeds, epochs, radius, json_output):
    """Lancer une étude d'ablation (interface, ssp ou delta)"""
    AblationView(json_output).ablate_command(study, manifest_path, seed, seeds, epochs, radius)


@cli.command()
@click.option('--limit', type=click.IntRange(min=1), default=20, show_default=True)
@json_option
def history(limit, json_output):
    """Lister les évaluations enregistrées"""
    EvaluationView(json_output).history_command(limit)


# === REGISTRE ===
@cli.command('init-db')
@click.option('--reset', is_flag=True, help="Supprimer l'historique existant")
def init_db(reset):
    """Initialiser le registre des évaluations"""
    with console.status("[bold green]Création des tables..."):
        success = init_database(reset)

    if success:
        console.print(f"[bold green]✓ {GENERAL_MESSAGES['database_initialized'].format(url=engine.url)}"
                      "[/bold green]")
    else:
        console.print("[bold red]✗ "
                      f"{GENERAL_MESSAGES['database_error'].format(error=engine.url)}[/bold red]")
        raise SystemExit(EXIT_IO)


if __name__ == '__main__':
    cli()
