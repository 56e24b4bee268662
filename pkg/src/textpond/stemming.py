"""Rule-based suffix-stripping stemmers used by the lemmatized-version transformation.

Two deterministic, dependency-free rule sets:

* ``stem_en`` — the classic five-step English suffix-stripping algorithm
  (measure-conditioned rules over consonant/vowel sequences).
* ``stem_fr`` — a compact French rule set, normative for this repo, applied
  in three passes:

  1. plural / feminine-plural endings::

         aux -> al     (remaining stem >= 2)
         x   -> ''     (remaining stem >= 3)
         s   -> ''     (remaining stem >= 3)

  2. one derivational or verbal suffix, longest match first; the matched
     suffix is removed only when the remaining stem keeps the minimum
     length, otherwise the word is left unchanged::

         issement -> '' (3)    atrice -> '' (3)    ateur -> '' (3)
         ation    -> '' (3)    ition  -> '' (3)    ement -> '' (3)
         erions   -> '' (3)    eraient-> '' (3)    erait -> '' (3)
         erons    -> '' (3)    eront  -> '' (3)    aient -> '' (4)
         ique     -> '' (3)    isme   -> '' (3)    able  -> '' (3)
         ible     -> '' (3)    ance   -> '' (3)    ence  -> '' (3)
         euse     -> '' (3)    iste   -> '' (3)    ive   -> '' (3)
         ité      -> '' (3)    eur    -> '' (4)    ant   -> '' (4)
         ent      -> '' (5)    ait    -> '' (4)    ez    -> '' (4)
         ée       -> '' (3)    er     -> '' (3)    é     -> '' (3)

  3. a final mute ``e`` is dropped when the remaining stem keeps length 3.

Both stemmers expect a lowercased token and leave words of length <= 2
untouched. ``stem(word, language)`` routes by ISO-639-1 code; unknown codes
fall back to the English rules.
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel->consonant transitions ([C](VC)^m[V] form)."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        cons = _is_consonant(stem, i)
        if cons and prev_vowel:
            m += 1
        prev_vowel = not cons
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(stem: str) -> bool:
    return (
        len(stem) >= 2
        and stem[-1] == stem[-2]
        and _is_consonant(stem, len(stem) - 1)
    )


def _ends_cvc(stem: str) -> bool:
    if len(stem) < 3:
        return False
    if not (
        _is_consonant(stem, len(stem) - 3)
        and not _is_consonant(stem, len(stem) - 2)
        and _is_consonant(stem, len(stem) - 1)
    ):
        return False
    return stem[-1] not in "wxy"


_STEP2 = (
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
)

_STEP3 = (
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
)

_STEP4 = (
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ion",
    "ism", "ate", "iti", "ous", "ive", "ize", "al", "er", "ic", "ou",
)


def _rule_table(word: str, table, min_measure: int) -> str:
    for suffix, repl in table:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > min_measure:
                return stem + repl
            return word
    return word


def stem_en(word: str) -> str:
    if len(word) <= 2:
        return word

    # step 1a
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies"):
        word = word[:-2]
    elif not word.endswith("ss") and word.endswith("s"):
        word = word[:-1]

    # step 1b
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            word = word[:-1]
    else:
        stripped = None
        if word.endswith("ed") and _contains_vowel(word[:-2]):
            stripped = word[:-2]
        elif word.endswith("ing") and _contains_vowel(word[:-3]):
            stripped = word[:-3]
        if stripped is not None:
            word = stripped
            if word.endswith(("at", "bl", "iz")):
                word += "e"
            elif _ends_double_consonant(word) and word[-1] not in "lsz":
                word = word[:-1]
            elif _measure(word) == 1 and _ends_cvc(word):
                word += "e"

    # step 1c
    if word.endswith("y") and _contains_vowel(word[:-1]):
        word = word[:-1] + "i"

    word = _rule_table(word, _STEP2, 0)
    word = _rule_table(word, _STEP3, 0)

    # step 4
    for suffix in sorted(_STEP4, key=len, reverse=True):
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if suffix == "ion" and (not stem or stem[-1] not in "st"):
                break
            if _measure(stem) > 1:
                word = stem
            break

    # step 5a
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem

    # step 5b
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        word = word[:-1]

    return word


# (suffix, replacement, minimum remaining stem length), longest suffix first
_FR_PLURAL = (
    ("aux", "al", 2),
    ("x", "", 3),
    ("s", "", 3),
)

_FR_SUFFIXES = (
    ("issement", "", 3), ("eraient", "", 3), ("erions", "", 3),
    ("atrice", "", 3), ("erait", "", 3), ("erons", "", 3), ("eront", "", 3),
    ("aient", "", 4), ("ateur", "", 3), ("ation", "", 3), ("ition", "", 3),
    ("ement", "", 3), ("ique", "", 3), ("isme", "", 3), ("able", "", 3),
    ("ible", "", 3), ("ance", "", 3), ("ence", "", 3), ("euse", "", 3),
    ("iste", "", 3), ("ive", "", 3), ("ité", "", 3), ("eur", "", 4),
    ("ant", "", 4), ("ent", "", 5), ("ait", "", 4), ("ez", "", 4),
    ("ée", "", 3), ("er", "", 3), ("é", "", 3),
)


def _apply_first(word: str, rules) -> str:
    for suffix, repl, min_len in rules:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if len(stem) >= min_len:
                return stem + repl
            return word
    return word


def stem_fr(word: str) -> str:
    if len(word) <= 2:
        return word
    word = _apply_first(word, _FR_PLURAL)
    word = _apply_first(word, _FR_SUFFIXES)
    if word.endswith("e") and len(word) - 1 >= 3:
        word = word[:-1]
    return word


_STEMMERS = {"en": stem_en, "fr": stem_fr}


def stem(word: str, language: str = "en") -> str:
    """Stem a lowercased token with the rules of ``language`` (fallback: en)."""
    return _STEMMERS.get(language, stem_en)(word)
