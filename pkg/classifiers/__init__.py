# Classifiers module initialization
