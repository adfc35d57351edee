"""
Utility modules for pebblekit.

### Helpers

- config_loader.py: Configuration handling
  - Find and load YAML experiment configurations
  - Merge suite sections with defaults
  - Validate configurations before a run

- enumeration.py: Input generators
  - Exhaustive words up to renaming of symbols
  - Seeded random words, sentences and automata

- file_io.py: File formats
  - Word text files (whitespace-separated symbols)
  - Automaton JSON files, byte-stable on output

### Usage

```python
from pebblekit.utils.enumeration import canonical_words
from pebblekit.utils.file_io import write_automaton

for w in canonical_words(max_len=4, pool=3):
    ...
```
"""
