# Networks module initialization
