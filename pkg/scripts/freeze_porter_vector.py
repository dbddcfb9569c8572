"""Freeze the stemmer oracle vector from NLTK's original-algorithm Porter stemmer.

Needs ``nltk`` (not a package dependency); run once, commit the JSON.
"""

import json
from pathlib import Path

from nltk.stem.porter import PorterStemmer

WORDS = """
checking checked caresses ponies ties caress cats feed agreed plastered bled
motoring sing conflated troubled sized hopping tanned falling hissing fizzed
failing filing happy sky relational conditional rational valenci hesitanci
digitizer conformabli radicalli differentli vileli analogousli vietnamization
predication operator feudalism decisiveness hopefulness callousness formaliti
sensitiviti sensibiliti triplicate formative formalize electriciti electrical
hopeful goodness revival allowance inference airliner gyroscopic adjustable
defensible irritant replacement adjustment dependent adoption homologou
communism activate angulariti homologous effective bowdlerize probate rate
cease controll roll kernel unable handle paging request pointer dereference
driver connection crashes running restart memory allocation failures hangs
network ethernet bonding bridge processor interface bluetooth
""".split()

if __name__ == "__main__":
    assert len(WORDS) == len(set(WORDS)) == 100, len(WORDS)
    porter = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    vector = {w: porter.stem(w) for w in WORDS}
    out = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "porter_vector.json"
    out.write_text(json.dumps(vector, indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(vector)} words to {out}")
