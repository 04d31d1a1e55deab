# Report maker module initialization
