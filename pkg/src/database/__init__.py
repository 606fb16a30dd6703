"""
Package database pour SPAC-Net desk

Ce package gère le registre SQLAlchemy des évaluations: chaque commande
eval lancée avec --record y enregistre un EvaluationRun et ses
SampleResult, consultables ensuite avec la commande history.

Modules:
    - connection.py: Moteur, fabrique de sessions, Base déclarative
    - init_db.py: Création (ou réinitialisation) des tables

Utilisation:
```python
from src.database.connection import SessionLocal, create_tables

session = SessionLocal()
create_tables(session.get_bind())
```

Fichier: src/database/__init__.py
"""
