"""Mean distances between a few point pairs: exact where the mismatch set is
periodic up to finitely many sites, windowed brackets otherwise."""
from meanlab.meanmetric import WindowParams, banach_mean_distance, weyl_distance
from meanlab.zoo import point, system

params = WindowParams(n_max=200, K=20)
cases = [
    ("fullshift:2", "periodic:01", "periodic:0011"),
    ("fullshift:2", "const:0", "flip:2Z"),
    ("fullshift:2", "random:1", "random:2"),
    ("sturmian:golden", "beta:0", "beta:1/10"),
]
for sysname, a, b in cases:
    X = system(sysname)
    x, y = point(a, X), point(b, X)
    bd, wd = banach_mean_distance(x, y, params), weyl_distance(x, y, params)
    print(f"{sysname:<16} {a:>14} vs {b:<14} Banach [{float(bd.lower):.6f}, {float(bd.upper):.6f}] "
          f"Weyl [{float(wd.lower):.6f}, {float(wd.upper):.6f}] ({bd.mode})")
