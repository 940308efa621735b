import numpy as np

# weights (pax, taxi, robust) of the five trade-off scenarios
SCENARIO_WEIGHTS = {1: (1.0, 0.0, 0.0),
                    2: (0.0, 1.0, 0.0),
                    3: (0.0, 0.0, 1.0),
                    4: (0.5, 0.5, 0.0),
                    5: (0.4, 0.4, 0.2)}

SCENARIO_LABELS = {1: 'Pax 100%',
                   2: 'Taxi 100%',
                   3: 'Robust 100%',
                   4: 'Pax 50%, Taxi 50%',
                   5: 'Pax 40%, Taxi 40%, Robust 20%'}

BALANCED_SCENARIO = 5


def derive_seed(seed, index):
    """Seed for the `index`-th independent run derived from a base seed.

    Adding further indices never changes the seeds derived for existing ones.

    Params:
    -------
    seed : int
        Non-negative base seed.
    index : int
        Non-negative run index, such as a scenario number.

    Returns:
    --------
    int
        Derived 64 bit seed.
    """

    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])
