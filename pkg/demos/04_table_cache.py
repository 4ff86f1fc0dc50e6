# %% [markdown]
# # Saving and reloading KL tables
#
# Tables can be written as compact binary files or as readable JSON. Loading
# a binary table skips both the group enumeration and the KL recursion.

# %%
import tempfile
import time
from pathlib import Path

from klw.coxeter import CoxeterSystem
from klw.hecke import KLTable
from klw.tableio import load_table, save_table

workdir = Path(tempfile.mkdtemp())

t0 = time.perf_counter()
b4 = KLTable.build(CoxeterSystem("B4"))
built = time.perf_counter() - t0
path = save_table(b4, workdir / "B4.klwt")
print(f"built {b4} in {built * 1e3:.1f} ms; file is {path.stat().st_size / 1024:.0f} KiB")

t0 = time.perf_counter()
again = load_table(path)
loaded = time.perf_counter() - t0
print(f"reloaded in {loaded * 1e3:.1f} ms; equal to the original: {again == b4}")

# %% [markdown]
# Exports are deterministic, so a reloaded table writes the same bytes.

# %%
copy = save_table(again, workdir / "copy.klwt")
print("byte-identical:", copy.read_bytes() == path.read_bytes())

small = save_table(KLTable.build("A2"), workdir / "A2.json")
print(small.read_text()[:200], "...")

# %% [markdown]
# From the shell, `klw table build -t B -r 4 B4.klwt` does the same, and
# setting KLW_TABLE_DIR makes every command reuse cached tables.
