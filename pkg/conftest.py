import os
import sys

# tests import src.* and the root scripts the way the scripts themselves do
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
