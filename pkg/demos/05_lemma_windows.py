"""Check the four lemma-level estimates behind the kernel bounds on dense grids.

Each returns a ratio window between the analyzed integral and its closed-form
comparable expression; bounded windows are the numerical content of the lemmas.

Usage: python demos/05_lemma_windows.py
"""

from conekernel.bounds import (
    lnss1_pair,
    lnss1_window,
    lnss2_window,
    lnss3_pair,
    lnss3_window,
    lnss4_window,
)

print("single configurations first:")
lhs, rhs = lnss1_pair(1.0, 0.1, 0.5, 0.3)
print(f"  endpoint concentration:  lhs {lhs:.6e}  rhs {rhs:.6e}  ratio {lhs/rhs:.3f}")
lhs, rhs = lnss3_pair(0.5, 1.0, 0.2)
print(f"  1-d kernel vs expression: lhs {lhs:.6e}  rhs {rhs:.6e}  ratio {lhs/rhs:.3f}")

print("\nfull grid windows (min/max of lhs/rhs):")
for name, window in (
    ("endpoint concentration ", lnss1_window()),
    ("singular endpoint      ", lnss2_window()),
    ("1-d kernel comparability", lnss3_window()),
):
    print(
        f"  {name}: n={window['n_configs']:5d}  "
        f"[{window['min_ratio']:.3e}, {window['max_ratio']:.3e}]  window {window['window']:.3e}"
    )
one_sided = lnss4_window()
print(f"  monotone tail (1-sided) : n={one_sided['n_configs']:5d}  max ratio {one_sided['max_ratio']:.3f}")
