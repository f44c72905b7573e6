"""Regenerates toy_tm.tsv and toy_tm.tmx.

Each template has one slot; its fillers make a family of near-duplicates
that differ by one interior word. Template length sets the fuzzy band of a
sibling match: 3 tokens -> 66, 4 -> 75, 5 -> 80, 10+ -> 90 and above.
"""
from pathlib import Path
from xml.sax.saxutils import escape

NOUNS = [
    ("committee", "comité"), ("commission", "commission"), ("council", "conseil"),
    ("agency", "agence"), ("authority", "autorité"), ("court", "cour"),
    ("parliament", "parlement"), ("board", "conseil d'administration"),
    ("secretariat", "secrétariat"), ("panel", "groupe"),
]
ADJS = [
    ("adequate", "adéquates"), ("necessary", "nécessaires"), ("sufficient", "suffisantes"),
    ("appropriate", "appropriées"), ("proportionate", "proportionnées"), ("effective", "efficaces"),
    ("binding", "contraignantes"), ("urgent", "urgentes"), ("temporary", "temporaires"),
    ("lawful", "licites"),
]
VERBS = [
    ("assess", "évaluer"), ("examine", "examiner"), ("verify", "vérifier"),
    ("review", "réexaminer"), ("determine", "déterminer"), ("monitor", "surveiller"),
    ("consider", "considérer"), ("decide", "décider"), ("check", "contrôler"),
    ("establish", "établir"),
]

# (english, french, filler list)
TEMPLATES = [
    ("the {} decides", "le {} décide", NOUNS),
    ("measures {} .", "mesures {} .", ADJS),
    ("to {} it", "{} cela", VERBS),
    ("the {} shall act", "le {} agit", NOUNS),
    ("these are {} steps", "ce sont des étapes {}", ADJS),
    ("we must {} this", "nous devons {} ceci", VERBS),
    ("the {} shall adopt rules", "le {} adopte des règles", NOUNS),
    ("such measures are {} here", "ces mesures sont {} ici", ADJS),
    ("member states shall {} compliance", "les États membres doivent {} la conformité", VERBS),
    ("the {} shall publish its annual report", "le {} publie son rapport annuel", NOUNS),
    ("the measures taken shall be {} in all cases",
     "les mesures prises doivent être {} dans tous les cas", ADJS),
    ("in order to {} whether the institution complies with the rules",
     "afin de {} si l'institution respecte les règles", VERBS),
    ("the {} shall inform the member states of the outcome without delay",
     "le {} informe sans délai les États membres du résultat", NOUNS),
    ("the provisions laid down in this regulation shall be {} for the whole period",
     "les dispositions prévues par le présent règlement sont {} pour toute la période", ADJS),
    ("the competent authorities shall {} the information provided by the applicant before the deadline",
     "les autorités compétentes doivent {} les informations fournies par le demandeur avant la date limite", VERBS),
    ("where appropriate the {} may request further information from the operator concerned",
     "le cas échéant le {} peut demander des informations complémentaires à l'opérateur concerné", NOUNS),
    ("the financial contribution shall be {} to the objectives pursued by the programme",
     "la contribution financière doit être {} aux objectifs poursuivis par le programme", ADJS),
    ("the commission shall {} the application of this directive every five years",
     "la commission doit {} l'application de la présente directive tous les cinq ans", VERBS),
    ("the {} met", "le {} s'est réuni", NOUNS),
    ("a {} result", "un résultat {}", ADJS),
]


def units():
    for en, fr, fillers in TEMPLATES:
        for f_en, f_fr in fillers:
            yield fr.format(f_fr), en.format(f_en)


def main():
    here = Path(__file__).parent
    rows = list(units())
    with open(here / "toy_tm.tsv", "w", encoding="utf-8", newline="\n") as f:
        for src, tgt in rows:
            f.write(f"{src}\t{tgt}\n")
    with open(here / "toy_tm.tmx", "w", encoding="utf-8", newline="\n") as f:
        f.write('<?xml version="1.0" encoding="UTF-8"?>\n<tmx version="1.4">\n')
        f.write('  <header srclang="fr" datatype="plaintext" segtype="sentence" adminlang="en"'
                ' creationtool="make_toy" creationtoolversion="1" o-tmf="none"/>\n  <body>\n')
        for src, tgt in rows:
            f.write('    <tu>\n')
            f.write(f'      <tuv xml:lang="fr"><seg>{escape(src)}</seg></tuv>\n')
            f.write(f'      <tuv xml:lang="en"><seg>{escape(tgt)}</seg></tuv>\n')
            f.write('    </tu>\n')
        f.write('  </body>\n</tmx>\n')
    print(len(rows), "units")


if __name__ == "__main__":
    main()
