"""
Attacks on protocols that authenticate with historical data.

The tag of every stored data piece is a function of the tag generation key
and the data piece, so an adversary holding both holds every tag: the tag
factor is not independent of the other two. Historical data from sensors is
also far from uniform, which makes it guessable.

"""

from ..primitives.entropy import is_low_entropy, shannon_entropy, simulated_sensor_stream
from ..primitives.group import tag_generate
from ..primitives.hashing import bytes_to_int
from ..threat_models.adversary import AdversaryModel
from .base_classes import Attack, Holdings

HISTORY_PROTOCOLS = ("P1woFS", "P1FS")

# Bits per symbol of the simulated sensor data; the resulting per-byte
# entropy falls inside the range observed for real sensor streams.
SENSOR_ALPHABET_BITS = 6
SENSOR_STREAM_LENGTH = 4096


def _history_names(model):
    index = model.atoms_of_kind("history-index")[0].name
    data = model.atoms_of_kind("history-data")[0].name
    tag = model.atoms_of_kind("history-tag")[0].name
    key = model.equations[tag].key.name
    return index, data, tag, key


class TagChainAttack(Attack):
    """Recompute the tag table from the tag generation key and the stored data."""

    protocol_ids = HISTORY_PROTOCOLS
    criteria = ("C3", "C4")
    required = {pid: ("K", "d_c") for pid in HISTORY_PROTOCOLS}

    @property
    def label(self):
        return "A1-tagchain"

    def default_adversary(self, model):
        return AdversaryModel(compromised=("TGK", "HD"), label=self.label)

    def run(self, deployment, transcripts, adversary, rng):
        model = deployment.model
        index, data, tag, key = _history_names(model)
        known = Holdings(deployment, adversary, rng)
        grp = model.group
        K = grp.decode(known[key])
        recovered, expected = {}, {}
        for i, (d_i, t_i) in enumerate(deployment.history):
            expected[f"{tag}[{i}]"] = t_i
        for i, (d_i, _) in sorted(known.material.history.items()):
            recovered[f"{tag}[{i}]"] = grp.encode(tag_generate(K, d_i, i, grp, deployment.suite))
        findings = [
            f"{len(recovered)} of {len(deployment.history)} tags recomputed from {key} "
            f"and the stored {data}"
        ]
        observed = transcripts[0].observed() if transcripts else {}
        if index in observed:
            i = bytes_to_int(observed[index])
            row = deployment.history_row(i)
            expected[tag] = row[1]
            if i in known.material.history:
                recovered[tag] = recovered[f"{tag}[{i}]"]
                findings.append(f"the tag of the observed session (row {i}) is known")
        return self.outcome(model, recovered, expected, findings=findings)

    def goal(self, model):
        _, _, tag, _ = _history_names(model)
        return {tag: model.symbols[tag]}


class EntropyAttack(Attack):
    """Flag historical data whose entropy makes it predictable."""

    protocol_ids = HISTORY_PROTOCOLS
    criteria = ("C4",)
    channel = None
    transcripts_needed = 0

    def __init__(self, alphabet_bits=SENSOR_ALPHABET_BITS, length=SENSOR_STREAM_LENGTH):
        self.alphabet_bits = alphabet_bits
        self.length = length

    @property
    def label(self):
        return "A1-entropy"

    def default_adversary(self, model):
        return AdversaryModel(channel=None, label=self.label)

    def run(self, deployment, transcripts, adversary, rng):
        threshold = deployment.suite.entropy_threshold
        stream = simulated_sensor_stream(self.alphabet_bits, self.length, rng)
        bits = shannon_entropy(stream)
        low = is_low_entropy(stream, threshold)
        findings = [
            f"sensor data carries {bits:.2f} bits per byte "
            + ("(below " if low else "(not below ")
            + f"{threshold})"
        ]
        return self.outcome(deployment.model, {}, {}, findings=findings, success=low)
