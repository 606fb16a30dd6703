"""
Vue d'évaluation - Commandes eval et history

Fonctionnalités:
    - eval: tableau CD-S / CD-M / CD-H / CD-Avg / F1 (distances × 1000),
      bloc secondaire CD-ℓ1 / Fidelity / MMD, rapport JSON écrit dans le
      dossier de sortie, enregistrement facultatif (--record)
    - history: tableau des évaluations enregistrées

La session SQLAlchemy n'est ouverte que pour --record et history.

Fichier: src/views/evaluation_view.py
"""

from typing import Optional

from src.config.messages import EVAL_MESSAGES
from src.controllers.evaluation_controller import EvaluationController
from src.database.connection import SessionLocal, create_tables
from src.models.metric_report import REPORT_COLUMNS, SECONDARY_COLUMNS
from .base_view import BaseView


class EvaluationView(BaseView):
    """Vue des commandes eval et history."""

    def __init__(self, json_output: bool = False):
        super().__init__(json_output)
        self.db = None

    def __del__(self):
        if getattr(self, 'db', None) is not None:
            self.db.close()

    def open_session(self):
        """Ouvrir la session du registre (tables créées si besoin)."""
        if self.db is None:
            self.db = SessionLocal()
            create_tables(self.db.get_bind())
        return self.db

    def eval_command(self, checkpoint: str, manifest_path: Optional[str] = None,
                     dataset_dir: Optional[str] = None, split: str = "test",
                     seed: Optional[int] = None, output_dir: Optional[str] = None,
                     mode: Optional[str] = None, delta: Optional[float] = None,
                     radius: Optional[float] = None, workers: Optional[int] = None,
                     record: bool = False):
        self.run(self._eval, checkpoint, manifest_path, dataset_dir, split, seed, output_dir,
                 mode, delta, radius, workers, record)

    def _eval(self, checkpoint, manifest_path, dataset_dir, split, seed, output_dir,
              mode, delta, radius, workers, record):
        controller = EvaluationController(self.open_session() if record else None)
        manifest = controller.load_manifest(manifest_path, seed, output_dir)
        config = controller.interface_config(manifest.interface, mode=mode, delta=delta,
                                             radius=radius)
        dataset_dir = dataset_dir or manifest.dataset_dir
        self.display_header(EVAL_MESSAGES["header"])

        with self.status(EVAL_MESSAGES["progress"]):
            report, model_hash = controller.evaluate(checkpoint, dataset_dir, config, split, workers)
        path = controller.write_report(report, manifest.output_path, split)
        run_id = None
        if record:
            run_id = controller.record(report, checkpoint, dataset_dir, model_hash, manifest.seed)

        if self.json_output:
            document = report.to_dict()
            document["report_path"] = str(path)
            document["run_id"] = run_id
            self.display_json(document)
            return

        values = report.display_columns()
        self.display_table(
            EVAL_MESSAGES["table_title"],
            [{"name": name, "style": "green", "justify": "right"} for name in REPORT_COLUMNS],
            [[self.format_value(values[name], 2 if name != "F1" else 3) for name in REPORT_COLUMNS]],
        )
        self.display_table(
            "",
            [{"name": name, "justify": "right"} for name in SECONDARY_COLUMNS],
            [[self.format_value(values[name], 3) for name in SECONDARY_COLUMNS]],
            style="dim",
        )
        self.display_info(str(path))
        if run_id is not None:
            self.display_success(EVAL_MESSAGES["recorded"].format(run_id=run_id))

    def history_command(self, limit: int = 20):
        self.run(self._history, limit)

    def _history(self, limit):
        controller = EvaluationController(self.open_session())
        runs = controller.history(limit)

        if self.json_output:
            self.display_json([{
                "id": run.id,
                "created_at": None if run.created_at is None else run.created_at.isoformat(),
                "checkpoint": run.checkpoint_path,
                "dataset": run.dataset_path,
                "config_hash": run.config_hash,
                "seed": run.seed,
                "sample_count": run.sample_count,
                "cd_avg": run.cd_avg,
                "f1": run.f1,
            } for run in runs])
            return

        self.display_header(EVAL_MESSAGES["history_header"])
        if not runs:
            self.display_info(EVAL_MESSAGES["no_history"])
            return
        rows = [[run.id,
                 "-" if run.created_at is None else run.created_at.strftime("%Y-%m-%d %H:%M"),
                 run.config_hash[:8], run.seed, run.sample_count,
                 self.format_value(None if run.cd_avg is None else run.cd_avg * 1000, 2),
                 self.format_value(run.f1, 3), run.checkpoint_path]
                for run in runs]
        self.display_table(
            EVAL_MESSAGES["history_table_title"],
            [{"name": "ID", "style": "cyan", "justify": "right"},
             {"name": "Date"},
             {"name": "Config", "style": "magenta"},
             {"name": "Graine", "justify": "right"},
             {"name": "Échantillons", "justify": "right"},
             {"name": "CD-Avg", "style": "green", "justify": "right"},
             {"name": "F1", "style": "green", "justify": "right"},
             {"name": "Checkpoint"}],
            rows,
        )
