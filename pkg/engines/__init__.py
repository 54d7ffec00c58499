"""Domain engines: the set store, finite structures, formulas and the checks built on them."""
