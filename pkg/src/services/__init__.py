"""
Package services pour SPAC-Net desk

Couche métier entre les contrôleurs et les modèles: géométrie des nuages,
synthèse des scans, localisation de l'interface, métriques, entraînement,
jeux de données et ablations.

Architecture de services:
    - geometry_service.py: FPS, k plus proches voisins, normalisation
    - scan_service.py: Formes synthétiques et découpes par point de vue
    - interface_service.py: Localisation de l'interface (3 modes)
    - metrics_service.py: Chamfer, F-score, Fidelity, MMD
    - training_service.py: Boucle d'entraînement, complétion, évaluation
    - dataset_service.py: Écriture et relecture des splits train/test
    - ablation_service.py: Études SSP, interface et seuil δ
    - logging_service.py: Journalisation centralisée avec intégration Sentry

Configuration environnements:
    - Développement: Logging local détaillé, Sentry optionnel
    - Test: Pas de Sentry (PYTEST_CURRENT_TEST)
    - Production: SENTRY_DSN renseigné

Utilisation:
```python
from src.services.scan_service import cut_viewpoint
from src.services.logging_service import SentryLogger
```

Fichier: src/services/__init__.py
"""
