import os
import sys

mod_dir = os.environ.get("SLOTSHIFT_MODULE_DIR")
src_dir = os.environ.get("SLOTSHIFT_SOURCE_DIR")
if mod_dir:
    sys.path.insert(0, mod_dir)
if src_dir:
    sys.path.insert(0, os.path.join(src_dir, "python"))
