#!/usr/bin/env python3
"""Generate a small Spanish-flavored demo corpus for trying the CLI.

Two synthetic magazine sources with mildly different topical leanings
across 2008-2018. Not a real dataset; just enough structure for the
pipeline to produce non-trivial output.

Usage: python3 scripts/make_demo_corpus.py [out.jsonl]
"""

import json
import random
import sys

THEMES = {
    "negocios": "empresa mercado negocio inversion economia finanzas gerente "
    "proyecto estrategia cliente producto empresario industria",
    "moda": "ropa estilo tendencia vestido zapatos coleccion marca pasarela "
    "temporada prenda accesorio elegante",
    "familia": "hijos madre padre familia casa escuela bebe crianza hogar "
    "ninos juego cumple abuela",
    "tecnologia": "tecnologia internet celular aplicacion pantalla red "
    "usuario dispositivo software digital futuro",
    "bienestar": "salud cuerpo ejercicio dieta bienestar energia descanso "
    "rutina habito mente yoga",
}

LEAN = {
    "mirador": {"negocios": 0.30, "tecnologia": 0.25, "moda": 0.10,
                "familia": 0.15, "bienestar": 0.20},
    "aurora": {"negocios": 0.10, "tecnologia": 0.15, "moda": 0.30,
               "familia": 0.25, "bienestar": 0.20},
}

FILLER = (
    "el la los las un una de del en con por para que se su es son fue "
    "tiene hace cada vez dia vida tiempo mundo"
).split()


def main() -> None:
    out_path = sys.argv[1] if len(sys.argv) > 1 else "demo-corpus.jsonl"
    rng = random.Random(2024)
    theme_words = {name: text.split() for name, text in THEMES.items()}
    with open(out_path, "w", encoding="utf-8") as fh:
        for source, weights in LEAN.items():
            names = list(weights)
            probs = [weights[n] for n in names]
            for year in range(2008, 2019):
                for d in range(20):
                    theme = rng.choices(names, probs)[0]
                    words = []
                    for _ in range(120):
                        if rng.random() < 0.4:
                            words.append(rng.choice(FILLER))
                        else:
                            words.append(rng.choice(theme_words[theme]))
                    fh.write(
                        json.dumps(
                            {
                                "id": f"{source}-{year}-{d:03d}",
                                "source": source,
                                "year": year,
                                "text": " ".join(words),
                            },
                            ensure_ascii=False,
                        )
                        + "\n"
                    )
    print(f"wrote demo corpus to {out_path}")


if __name__ == "__main__":
    main()
