"""How well can local hidden variables do? Exhaustive search over every deterministic strategy."""

# %%
import time

from clustergames import build_s_all, build_s_optimal, max_lhv_bell, max_lhv_triangle, triangle_spec
from clustergames.games import best_classical_assignment, classical_rows

tri = max_lhv_triangle(triangle_spec())
print(f"triangle: best classical win rate {tri.value} over {tri.assignments} strategies ({tri.maximizers} optimal)")

# %% The hand-picked strategy X_odd = -1, X_even = +1, Y_odd = +1 loses only the 000 row
rows = classical_rows(best_classical_assignment())
print("lost rows:", [c for c, won in rows.items() if not won])

# %% Bell operators built from stabilizer products
for spec in (build_s_all(), build_s_optimal()):
    t0 = time.perf_counter()
    b = max_lhv_bell(spec)
    print(
        f"{spec.label}: {len(spec.terms)} terms, quantum {spec.quantum_value:g}, LHV max {b.value:g} "
        f"({b.assignments} assignments, {time.perf_counter() - t0:.2f} s); "
        f"classical win threshold {(1 + b.value / spec.quantum_value) / 2:.4f}"
    )
