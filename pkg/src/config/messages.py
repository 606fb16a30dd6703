"""
Fichier de configuration pour centraliser tous les messages CLI et d'erreur
Fichier: src/config/messages.py
"""

# ===== MESSAGES DE VALIDATION =====
VALIDATION_MESSAGES = {
    'integer_required': "Le paramètre {name} doit être un entier (reçu: {value!r})",
    'integer_too_small': "Le paramètre {name} doit être ≥ {minimum} (reçu: {value})",
    'integer_out_of_range': "Le paramètre {name} doit être dans [{low}, {high}] (reçu: {value})",
    'real_required': "Le paramètre {name} doit être un réel (reçu: {value!r})",
    'real_not_positive': "Le paramètre {name} doit être un réel fini > 0 (reçu: {value})",
    'real_negative': "Le paramètre {name} doit être un réel fini ≥ 0 (reçu: {value})",
    'open_unit_interval': "Le paramètre {name} doit être dans l'intervalle ouvert (0, 1) (reçu: {value})",
    'points_shape': "{name}: forme attendue (n, 3), reçue {shape}",
    'points_not_finite': "{name}: coordonnées non finies (NaN ou Inf)",
    'point_not_finite': "Point à coordonnées non finies: {point}",
    'point_arity': "Un point 3D exige 3 coordonnées (reçu: {count})",
    'index_out_of_range': "Indice {name}={value} hors de [0, {count})",
    'misaligned': "{first} ({first_len}) et {second} ({second_len}) ne sont pas alignés",
    'enum_invalid': "Valeur invalide pour {name}: {value!r} (valeurs permises: {allowed})",
    'labels_length': "Nombre d'étiquettes ({labels}) différent du nombre de points ({points})",
    'neighbor_is_center': "Le centre {index} ne peut pas être son propre voisin",
    'neighbors_unsorted': "Les distances de voisinage doivent être croissantes",
    'cloud_empty': "Le nuage de points est vide",
    'cloud_too_small': "Le nuage contient {count} points, {minimum} au minimum requis",
    'shape_parameter_unknown': "Paramètre {name!r} inconnu pour la forme {kind}",
    'shape_spec_required': "Une ShapeSpec est requise",
    'partial_empty': "La fraction {fraction} retire les {count} points: scan partiel vide",
    'interface_indices_invalid': "Indices d'interface hors du scan partiel",
    'interface_indices_repeated': "Indices d'interface répétés sans remplissage",
    'interface_mode_mismatch': "Mode {expected} requis, configuration en mode {actual}",
    'occlusion_point_required': "Le mode occlusion_point exige un point d'occlusion",
    'library_empty': "La bibliothèque de référence est vide",
    'fscore_range': "Le F-Score doit être dans [0, 1] (reçu: {value})",
    'threshold_invalid': "Le seuil doit être un réel fini > 0 (reçu: {value})",
    'shape_mismatch': "Formes incompatibles pour {op}: {left} et {right}",
    'rank_invalid': "{op} attend un tenseur de rang {expected}, reçu la forme {shape}",
    'heads_divisibility': "La dimension {dim} n'est pas divisible par {heads} têtes",
    'widths_empty': "La liste des largeurs de couches est vide",
    'parameter_unknown': "Paramètre {name!r} inconnu dans le ParamStore",
    'parameter_duplicate': "Paramètre {name!r} déjà déclaré",
    'gradients_misaligned': "Gradient absent ou de forme incorrecte pour {name}",
    'config_invalid': "Configuration invalide: {detail}",
    'dataset_empty': "Le jeu de données {split} est vide",
    'betas_invalid': "Les coefficients beta doivent être dans [0, 1) (reçu: {value})",
    'fold_grid_invalid': "La grille de pliage {grid} ne correspond pas au facteur r={r}",
}

# ===== MESSAGES DE FICHIERS =====
FILE_MESSAGES = {
    'not_found': "Fichier introuvable: {path}",
    'unreadable': "Lecture impossible de {path}: {error}",
    'unwritable': "Écriture impossible de {path}: {error}",
    'parse_error': "{path}, ligne {line}: {detail}",
    'not_utf8': "octet 0x{byte:02x} hors UTF-8",
    'ply_magic': "en-tête PLY absent",
    'ply_format': "seul le format PLY ascii 1.0 est supporté",
    'ply_header_end': "fin d'en-tête (end_header) absente",
    'ply_vertex_missing': "élément vertex absent",
    'ply_property_missing': "propriétés x, y, z requises",
    'ply_count': "{expected} sommets annoncés, {actual} lus",
    'field_count': "{expected} champs attendus, {actual} lus",
    'not_a_number': "valeur non numérique {value!r}",
    'not_finite': "coordonnée non finie {value!r}",
    'extension_unknown': "Extension inconnue pour {path} (ply ou xyz attendu)",
    'manifest_invalid': "Manifeste invalide {path}: {detail}",
    'dataset_missing': "Jeu de données absent: {path} (lancer la commande synth)",
    'checkpoint_magic': "{path} n'est pas un checkpoint SPAC-Net",
    'checkpoint_truncated': "Checkpoint {path} tronqué",
    'checkpoint_version': "Version de checkpoint non supportée: {version}",
    'checkpoint_config': "Le checkpoint {path} a été produit avec une autre configuration",
    'checkpoint_manifest': "Manifeste de paramètres incompatible: {detail}",
}

# ===== MESSAGES DE SYNTHÈSE =====
SYNTH_MESSAGES = {
    'header': "SYNTHÈSE DU JEU DE DONNÉES",
    'progress': "[bold green]Génération des échantillons...",
    'success': "Jeu de données généré: {count} échantillons dans {path}",
    'table_title': "Échantillons générés",
    'split_summary': "{split}: {count} échantillons",
}

# ===== MESSAGES D'INTERFACE =====
INTERFACE_MESSAGES = {
    'header': "LOCALISATION DE L'INTERFACE",
    'success': "Interface localisée: {count} points (mode {mode})",
    'written': "Nuage étiqueté écrit dans {path}",
    'padded': "Interface complétée par répétition jusqu'à {n_t} points",
    'none_detected': "Aucun bord détecté avec ces seuils",
}

# ===== MESSAGES D'ENTRAÎNEMENT =====
TRAIN_MESSAGES = {
    'header': "ENTRAÎNEMENT SPAC-NET",
    'progress': "[bold green]Entraînement en cours...",
    'epoch': "Époque {epoch}: perte moyenne {loss:.6f} (lr {lr:.2e})",
    'checkpoint_saved': "Checkpoint écrit: {path}",
    'success': "Entraînement terminé en {epochs} époques",
    'numeric_failure': "Échec numérique à l'étape {step} ({op})",
    'resumed': "Reprise depuis {path} (époque {epoch})",
}

# ===== MESSAGES D'ÉVALUATION =====
EVAL_MESSAGES = {
    'header': "ÉVALUATION SPAC-NET",
    'complete_header': "COMPLÉTION D'UN SCAN",
    'ablation_header': "ÉTUDE D'ABLATION",
    'history_header': "HISTORIQUE DES ÉVALUATIONS",
    'progress': "[bold green]Évaluation en cours...",
    'table_title': "Résultats (CD-ℓ2 × 1000, F-Score@1%)",
    'ablation_table_title': "Ablation (CD-ℓ2 × 1000)",
    'history_table_title': "Évaluations enregistrées",
    'completion_written': "Complétion écrite dans {path} ({count} points)",
    'recorded': "Évaluation enregistrée (id {run_id})",
    'no_history': "Aucune évaluation enregistrée",
}

# ===== MESSAGES GÉNÉRAUX =====
GENERAL_MESSAGES = {
    'app_title': "SPAC-Net desk",
    'app_subtitle': " - Complétion de nuages de points par interface",
    'validation_error': "Paramètre invalide: {error}",
    'file_error': "Erreur de fichier: {error}",
    'parse_error': "Erreur de lecture: {error}",
    'numeric_error': "Échec numérique: {error}",
    'unexpected_error': "Erreur inattendue: {error}",
    'database_initialized': "Registre des évaluations initialisé: {url}",
    'database_error': "Erreur de base de données: {error}",
}
