"""
Modèles du registre des évaluations - EvaluationRun et SampleResult

Ce module définit les tables SQLAlchemy où la commande eval --record
enregistre ses résultats, pour comparer les exécutions dans le temps.

Architecture relationnelle:
    - Une évaluation (EvaluationRun) porte les colonnes agrégées
    - Elle possède un SampleResult par échantillon évalué (relation 1:N)

Les distances sont stockées brutes (non multipliées par 1000).

Fichier: src/models/evaluation_record.py
"""
from sqlalchemy import Column, DateTime, Float, ForeignKey, Integer, String
from sqlalchemy.orm import relationship
from sqlalchemy.sql import func

from src.database.connection import Base
from src.models.metric_report import AggregateReport


class EvaluationRun(Base):
    """
    Une exécution de la commande eval.

    Attributes:
        id: Identifiant (clé primaire)
        created_at: Date d'enregistrement
        checkpoint_path: Checkpoint évalué
        dataset_path: Jeu de données évalué
        config_hash: Empreinte de la configuration du modèle
        seed: Graine globale du manifeste
        cd_s, cd_m, cd_h, cd_avg: CD-ℓ2 moyenne par difficulté et moyenne
        f1: F-Score@1% moyen
        fidelity, mmd: Métriques secondaires (absentes si non calculées)
    """
    __tablename__ = "evaluation_runs"

    id = Column(Integer, primary_key=True, index=True)
    created_at = Column(DateTime(timezone=True), server_default=func.now())
    checkpoint_path = Column(String(512), nullable=False)
    dataset_path = Column(String(512), nullable=False)
    config_hash = Column(String(64), nullable=False, index=True)
    seed = Column(Integer, nullable=False, default=0)
    sample_count = Column(Integer, nullable=False, default=0)

    cd_s = Column(Float)
    cd_m = Column(Float)
    cd_h = Column(Float)
    cd_avg = Column(Float)
    f1 = Column(Float)
    fidelity = Column(Float)
    mmd = Column(Float)

    samples = relationship("SampleResult", back_populates="run", cascade="all, delete-orphan")

    def __repr__(self):
        return f"<EvaluationRun(id={self.id}, config={self.config_hash[:8]}, cd_avg={self.cd_avg})>"

    @classmethod
    def from_report(cls, report: AggregateReport, checkpoint_path: str, dataset_path: str,
                    config_hash: str, seed: int) -> "EvaluationRun":
        """Construire une exécution et ses lignes par échantillon depuis un rapport agrégé."""
        columns = report.columns()
        run = cls(
            checkpoint_path=str(checkpoint_path),
            dataset_path=str(dataset_path),
            config_hash=config_hash,
            seed=seed,
            sample_count=report.sample_count,
            cd_s=columns.get("CD-S"),
            cd_m=columns.get("CD-M"),
            cd_h=columns.get("CD-H"),
            cd_avg=columns.get("CD-Avg"),
            f1=columns.get("F1"),
            fidelity=columns.get("Fidelity"),
            mmd=columns.get("MMD"),
        )
        for sample in report.reports:
            run.samples.append(SampleResult(
                sample_id=sample.sample_id,
                difficulty=None if sample.difficulty is None else sample.difficulty.value,
                cd_l1=sample.cd_l1,
                cd_l2=sample.cd_l2,
                fscore=sample.fscore,
                fidelity=sample.fidelity,
                mmd=sample.mmd,
            ))
        return run


class SampleResult(Base):
    """Métriques brutes d'un échantillon d'une évaluation."""
    __tablename__ = "sample_results"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("evaluation_runs.id"), nullable=False, index=True)
    sample_id = Column(String(128), nullable=False)
    difficulty = Column(String(16))
    cd_l1 = Column(Float, nullable=False)
    cd_l2 = Column(Float, nullable=False)
    fscore = Column(Float, nullable=False)
    fidelity = Column(Float)
    mmd = Column(Float)

    run = relationship("EvaluationRun", back_populates="samples")

    def __repr__(self):
        return f"<SampleResult(run={self.run_id}, sample={self.sample_id}, cd_l2={self.cd_l2})>"
