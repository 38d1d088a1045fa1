"""Spanish suffix-stripping stemmer.

Standalone implementation of the Snowball Spanish stemming algorithm
(attached-pronoun removal, standard suffix removal, verb suffix removal,
residual suffix removal, final de-accenting). Regions R1/R2/RV are kept
as absolute start offsets; every edit is a suffix deletion or a
same-alignment replacement, so the offsets stay valid throughout.
"""

from __future__ import annotations

_VOWELS = frozenset("aeiou\xe1\xe9\xed\xf3\xfa\xfc")

_DEACCENT = str.maketrans("\xe1\xe9\xed\xf3\xfa", "aeiou")

# Attached pronouns, longest first.
_STEP0_PRONOUNS = (
    "selas", "selos", "sela", "selo",
    "las", "les", "los", "nos",
    "me", "se", "la", "le", "lo",
)

# Verb endings that license pronoun removal (the accented ones lose
# their accent afterwards; checked against the part that precedes the
# pronoun, which must itself sit inside RV).
_STEP0_PRECEDING = (
    "i\xe9ndo", "iendo", "\xe1ndo", "ando",
    "\xe1r", "ar", "\xe9r", "er", "\xedr", "ir",
)

_STEP1_SUFFIXES = (
    "amientos", "imientos",
    "amiento", "imiento", "aciones", "uciones",
    "adoras", "adores", "ancias", "log\xedas", "encias", "amente", "idades",
    "acion", "anzas", "ismos", "ables", "ibles", "istas", "adora",
    "aci\xf3n", "antes", "ancia", "log\xeda", "uci\xf3n", "encia", "mente",
    "anza", "icos", "icas", "ismo", "able", "ible", "ista", "osos", "osas",
    "ador", "ante", "idad", "ivas", "ivos",
    "ico", "ica", "oso", "osa", "iva", "ivo",
)

_STEP1_DELETE_IC_AFTER = frozenset((
    "adora", "ador", "aci\xf3n", "adoras", "adores", "acion", "aciones",
    "ante", "antes", "ancia", "ancias",
))

_STEP2A_SUFFIXES = (
    "yeron", "yendo", "yamos",
    "yais",
    "yan", "yen", "yas", "yes",
    "ya", "ye", "yo", "y\xf3",
)

_STEP2B_SUFFIXES = (
    "ar\xedamos", "er\xedamos", "ir\xedamos", "i\xe9ramos", "i\xe9semos",
    "ar\xedais", "aremos", "er\xedais", "eremos", "ir\xedais", "iremos",
    "ierais", "ieseis", "asteis", "isteis", "\xe1bamos", "\xe1ramos",
    "\xe1semos",
    "ar\xedan", "ar\xedas", "ar\xe9is", "er\xedan", "er\xedas", "er\xe9is",
    "ir\xedan", "ir\xedas", "ir\xe9is", "ieran", "iesen", "ieron", "iendo",
    "ieras", "ieses", "abais", "arais", "aseis", "\xe9amos",
    "ar\xe1n", "ar\xe1s", "ar\xeda", "er\xe1n", "er\xe1s", "er\xeda",
    "ir\xe1n", "ir\xe1s", "ir\xeda", "iera", "iese", "aste", "iste",
    "aban", "aran", "asen", "aron", "ando", "abas", "adas", "idas",
    "aras", "ases", "\xedais", "ados", "idos", "amos", "imos", "emos",
    "ar\xe1", "ar\xe9", "er\xe1", "er\xe9", "ir\xe1", "ir\xe9",
    "aba", "ada", "ida", "ara", "ase", "\xedan", "ado", "ido", "\xedas",
    "\xe1is", "\xe9is",
    "\xeda", "ad", "ed", "id", "an", "i\xf3", "ar", "er", "ir", "as",
    "\xeds", "en", "es",
)

_STEP2B_GU_TRIGGERS = frozenset(("en", "es", "\xe9is", "emos"))

_STEP3_SUFFIXES = ("os", "a", "e", "o", "\xe1", "\xe9", "\xed", "\xf3")


def _region_starts(word: str) -> tuple[int, int, int]:
    """Start offsets of R1, R2 and RV (len(word) when a region is empty)."""
    n = len(word)
    r1 = n
    for i in range(1, n):
        if word[i] not in _VOWELS and word[i - 1] in _VOWELS:
            r1 = i + 1
            break
    r2 = n
    for i in range(r1 + 1, n):
        if word[i] not in _VOWELS and word[i - 1] in _VOWELS:
            r2 = i + 1
            break
    rv = n
    if n >= 3:
        if word[1] not in _VOWELS:
            for i in range(2, n):
                if word[i] in _VOWELS:
                    rv = i + 1
                    break
        elif word[0] in _VOWELS and word[1] in _VOWELS:
            for i in range(2, n):
                if word[i] not in _VOWELS:
                    rv = i + 1
                    break
        else:
            rv = 3
    return r1, r2, rv


def _longest_suffix(word: str, suffixes: tuple[str, ...], start: int) -> str | None:
    """Longest entry of `suffixes` that ends `word` at or after `start`.

    The tuples above are ordered longest-first, so the first hit wins.
    """
    for suffix in suffixes:
        if word.endswith(suffix) and len(word) - len(suffix) >= start:
            return suffix
    return None


def stem(word: str) -> str:
    """Stem one lowercase Spanish word.

    Accented input is handled (verb suffixes carry acute accents); the
    returned stem is always de-accented. Words too short to have any
    suffix region pass through unchanged.
    """
    word = word.lower()
    r1, r2, rv = _region_starts(word)

    # Step 0: attached pronouns after a gerund or infinitive.
    suffix = _longest_suffix(word, _STEP0_PRONOUNS, rv)
    if suffix is not None:
        head = word[: -len(suffix)]
        licensed = any(
            head.endswith(form) and len(head) - len(form) >= rv
            for form in _STEP0_PRECEDING
        ) or (
            head.endswith("uyendo") and len(head) - 5 >= rv
        )
        if licensed:
            word = head.translate(_DEACCENT)

    # Step 1: standard (derivational) suffixes.
    step1_done = False
    suffix = _longest_suffix(word, _STEP1_SUFFIXES, 0)
    if suffix is not None:
        pos = len(word) - len(suffix)
        if suffix == "amente" and pos >= r1:
            step1_done = True
            word = word[:pos]
            if word.endswith("iv") and len(word) - 2 >= r2:
                word = word[:-2]
                if word.endswith("at") and len(word) - 2 >= r2:
                    word = word[:-2]
            elif (
                word.endswith(("os", "ic", "ad"))
                and len(word) - 2 >= r2
            ):
                word = word[:-2]
        elif suffix != "amente" and pos >= r2:
            step1_done = True
            if suffix in _STEP1_DELETE_IC_AFTER:
                word = word[:pos]
                if word.endswith("ic") and len(word) - 2 >= r2:
                    word = word[:-2]
            elif suffix in ("log\xeda", "log\xedas"):
                word = word[:pos] + "log"
            elif suffix in ("uci\xf3n", "uciones"):
                word = word[:pos] + "u"
            elif suffix in ("encia", "encias"):
                word = word[:pos] + "ente"
            elif suffix == "mente":
                word = word[:pos]
                if (
                    word.endswith(("ante", "able", "ible"))
                    and len(word) - 4 >= r2
                ):
                    word = word[:-4]
            elif suffix in ("idad", "idades"):
                word = word[:pos]
                for prefix in ("abil", "ic", "iv"):
                    if (
                        word.endswith(prefix)
                        and len(word) - len(prefix) >= r2
                    ):
                        word = word[: -len(prefix)]
            elif suffix in ("ivo", "iva", "ivos", "ivas"):
                word = word[:pos]
                if word.endswith("at") and len(word) - 2 >= r2:
                    word = word[:-2]
            else:
                word = word[:pos]

    if not step1_done:
        # Step 2a: verb suffixes beginning with 'y' after 'u'.
        for suffix in _STEP2A_SUFFIXES:
            pos = len(word) - len(suffix)
            if (
                word.endswith(suffix)
                and pos >= rv
                and word[pos - 1 : pos] == "u"
            ):
                word = word[:pos]
                break

        # Step 2b: remaining verb suffixes.
        suffix = _longest_suffix(word, _STEP2B_SUFFIXES, rv)
        if suffix is not None:
            word = word[: -len(suffix)]
            if suffix in _STEP2B_GU_TRIGGERS and word.endswith("gu"):
                word = word[:-1]

    # Step 3: residual vowel suffixes.
    suffix = _longest_suffix(word, _STEP3_SUFFIXES, rv)
    if suffix is not None:
        word = word[: -len(suffix)]
        if suffix in ("e", "\xe9"):
            if word.endswith("gu") and len(word) - 1 >= rv:
                word = word[:-1]

    return word.translate(_DEACCENT)
