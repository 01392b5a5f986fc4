"""Equicontinuity/sensitivity verdicts across the zoo, with the certified
witness radius where one exists."""
from meanlab.entropy import topological_entropy
from meanlab.meanmetric import classify_system
from meanlab.zoo import system

for name in ("fullshift:2", "sft:golden", "periodic:01", "periodic:001", "sturmian:golden"):
    X = system(name)
    rep = classify_system(X)
    d0 = rep.points[0].delta0
    h = topological_entropy(X, n_max=14)
    print(f"{name:<17} {rep.label:<32} delta0={d0}  entropy<={float(h.upper):.4f} ({h.claim})")
