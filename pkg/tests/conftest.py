import os
import sys

# make helpers.py importable regardless of pytest import mode
sys.path.insert(0, os.path.dirname(__file__))
