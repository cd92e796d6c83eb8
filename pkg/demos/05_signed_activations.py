"""From raw logit grids to sparse vectors, with and without negative weights.

The input is the raw score grid a masked-LM head would produce: one row per
input position, one column per vocabulary term.  The classic activation
keeps the positive part only.  The signed variant shifts the curve by an
epsilon on both sides, which opens a [-eps, +eps] dead zone (sparsity) and
lets strongly negative logits become negative term weights.
"""

import numpy as np

from setvec import (
    ActivationConfig,
    LogitMatrix,
    Vocabulary,
    snrelu_activate,
    snrelu_neg,
    snrelu_pos,
    splade_activate,
)


def main():
    vocab = Vocabulary(["monarch", "book", "european", "king", "fiction"])
    # three input positions; "european" is pushed strongly negative
    grid = np.array(
        [
            [2.1, 0.9, -3.0, 0.4, 0.05],
            [1.4, 1.2, -2.2, 0.7, -0.1],
            [0.3, 0.2, -2.8, 1.1, 0.2],
        ]
    )
    m = LogitMatrix(grid, range(5), vocab)

    print("positive-only activation (log-saturated, max-pooled):")
    for term, w in splade_activate(m).to_dict().items():
        print(f"  {term:<10} {w:+.3f}")
    print("  ^ 'european' cannot be represented at all, only omitted\n")

    cfg = ActivationConfig(epsilon=0.25, neg_formula="corrected", aggregation="sum")
    print(f"signed activation (eps={cfg.epsilon}, corrected, sum-aggregated):")
    for term, w in snrelu_activate(m, cfg).to_dict().items():
        print(f"  {term:<10} {w:+.3f}")
    print("  ^ 'european' now carries a penalty; 'fiction' fell in the dead zone\n")

    xs = [-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0]
    print("the two halves of the activation around the dead zone:")
    print("  x      pos(x)  neg(x, corrected)  neg(x, literal)")
    for x in xs:
        print(
            f"  {x:+.2f}  {float(snrelu_pos(x, 0.25)):+.3f}  "
            f"{float(snrelu_neg(x, 0.25, 'corrected')):+17.3f}  "
            f"{float(snrelu_neg(x, 0.25, 'literal')):+15.3f}"
        )
    print(
        "\nnote the literal spelling fires inside (-eps, eps), defeating"
        "\nsparsity; the corrected one is zero there and odd-symmetric."
    )


if __name__ == "__main__":
    main()
