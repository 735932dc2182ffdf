# intentionally empty – marks this directory as a Python package
