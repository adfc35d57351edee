import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from pebblekit.datawords import DataWord, DataWordError
from pebblekit.pa_engine import PebbleAutomaton, automaton_from_dict, automaton_to_dict
from pebblekit.regauto import RegisterAutomaton, ra_to_dict

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class FileFormatError(ValueError):
    """Raised when a word, automaton or formula file cannot be read"""
    pass


def _is_comment(line: str) -> bool:
    return line.lstrip().startswith("#")


def read_word(path: PathLike) -> DataWord:
    """Read a word: whitespace-separated symbol names, `#` lines skipped. An empty file is the empty word."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    try:
        return DataWord.parse(" ".join(line for line in lines if not _is_comment(line)))
    except DataWordError as e:
        raise FileFormatError(f"{path}: {e}")


def write_word(w: DataWord, path: PathLike) -> None:
    Path(path).write_text(w.to_text() + "\n", encoding="utf-8")


def read_lines(path: PathLike) -> List[str]:
    """Non-blank, non-comment lines, e.g. one formula per line."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.strip() for line in lines if line.strip() and not _is_comment(line)]


def dumps_json(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def dumps_automaton(a: Union[PebbleAutomaton, RegisterAutomaton]) -> str:
    """Byte-stable JSON text of a pebble or register automaton."""
    if isinstance(a, RegisterAutomaton):
        return dumps_json(ra_to_dict(a))
    return dumps_json(automaton_to_dict(a))


def write_automaton(a: Union[PebbleAutomaton, RegisterAutomaton], path: PathLike) -> None:
    Path(path).write_text(dumps_automaton(a), encoding="utf-8")
    logger.debug(f"Wrote automaton to {path}")


def read_automaton(path: PathLike) -> PebbleAutomaton:
    """Load a pebble automaton JSON file.

    Raises:
        FileFormatError: If the file is not valid JSON
        MalformedAutomaton: If the JSON does not describe a valid automaton
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FileFormatError(f"{path}: invalid JSON ({e})")
    return automaton_from_dict(data)
