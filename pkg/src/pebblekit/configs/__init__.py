"""
# Configuration Overview

## 1. Experiment Configuration (experiment_config.yaml)

* **defaults**: Values shared by every suite (`seed`, `workers`)
* **suites**: One section per suite, named as on the command line

## 2. Suite Keys

* **k**
  - Pebble count, or a list of pebble counts / chain lengths to cover

* **m**
  - Witness multiplicities (periodicity, witness)

* **pool**
  - Number of distinct symbols words are drawn from

* **max_len**
  - Longest word; exhaustive suites enumerate every length up to it

* **samples**
  - Random inputs to draw (0 keeps a suite exhaustive where it supports it)

* **words_per_sentence**, **max_size**, **max_fqr**
  - Shape of the random sentences in `ltl-compile`

* **cases**, **states**
  - Number and size of random automata in `engine`

* **max_run_len**
  - Longest witness word the Savitch automaton is run on

* **per_k** (savitch)
  - `pool`, `max_len` and `samples` for one pebble count, e.g. sampled
    words for k = 3 next to the exhaustive k = 2 run. Dropped when a
    `--pool`, `--max-len` or `--samples` flag is given

## 3. Precedence

Command-line flag, then `PEBBLE_SEED` (seed only), then the suite section,
then `defaults`. `PEBBLE_CONFIG` or `--config` selects another file.

```yaml
suites:
  savitch:
    k: [2, 3]
    pool: 4
    max_len: 10
    samples: 0
    per_k:
      3: {pool: 6, max_len: 16, samples: 1000}
```
"""
