# Fichier __init__.py pour faire du répertoire racine un package Python
