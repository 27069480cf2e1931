import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
SMARTCARD = os.path.join(DATA_DIR, "smartcard.json")
