"""Line-oriented verification reports.

Every sweep in the lab produces a Report. Rendering is deterministic: lines
come out grouped by kind, each group in insertion order, so identical runs give
byte-identical output.

    MODE exhaustive|bounded
    CHECK <name> PASS|FAIL
    COUNT <key> <n>
    VERDICT <class> SET <element> | VERDICT <class> PARADOXICAL
    WITNESS <class-bitmap> <subset-element> <witness-element>
    COUNTEREXAMPLE <structure-bitmap> <details>
    MEMBER <stage> <set>
    NOTE <text>
"""
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .guards import EXIT_FAIL, EXIT_OK, InputError

# Counterexamples kept verbatim; the rest are only counted
MAX_LISTED = 64


@dataclass
class Report:
    name: str
    bounded: bool = False
    checks: Dict[str, bool] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)
    verdicts: List[str] = field(default_factory=list)
    witnesses: List[Tuple[str, str, str]] = field(default_factory=list)
    counterexamples: List[Tuple[str, str]] = field(default_factory=list)
    members: List[Tuple[str, str]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def check(self, name: str, passed: bool) -> bool:
        self.checks[name] = self.checks.get(name, True) and bool(passed)
        return passed

    def count(self, key: str, n: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + n

    def witness(self, class_bitmap, subset_element, witness_element) -> None:
        self.witnesses.append((str(class_bitmap), str(subset_element), str(witness_element)))

    def counterexample(self, structure_bitmap, details: str) -> None:
        self.count('counterexamples')
        if len(self.counterexamples) < MAX_LISTED:
            self.counterexamples.append((str(structure_bitmap), ' '.join(details.split())))

    def verdict(self, line: str) -> None:
        self.verdicts.append(line)

    def member(self, stage, rendered: str) -> None:
        self.members.append((str(stage), rendered))

    def note(self, text: str) -> None:
        self.notes.append(' '.join(text.split()))

    @property
    def passed(self) -> bool:
        return all(self.checks.values()) and not self.counts.get('counterexamples', 0)

    def merge(self, other: 'Report') -> 'Report':
        """Associative merge; checks AND together, counts add up"""
        merged = Report(self.name, bounded=self.bounded or other.bounded)
        for source in (self, other):
            for key, value in source.checks.items():
                merged.check(key, value)
            for key, value in source.counts.items():
                merged.count(key, value)
            merged.verdicts.extend(source.verdicts)
            merged.witnesses.extend(source.witnesses)
            merged.counterexamples.extend(source.counterexamples)
            merged.members.extend(source.members)
            merged.notes.extend(source.notes)
        merged.counterexamples = merged.counterexamples[:MAX_LISTED]
        return merged

    def lines(self) -> List[str]:
        out = [f"MODE {'bounded' if self.bounded else 'exhaustive'}"]
        out += [f"CHECK {name} {'PASS' if ok else 'FAIL'}" for name, ok in self.checks.items()]
        out += [f"COUNT {key} {n}" for key, n in self.counts.items()]
        out += [f"VERDICT {line}" for line in self.verdicts]
        out += [f"WITNESS {c} {s} {w}" for c, s, w in self.witnesses]
        out += [f"COUNTEREXAMPLE {b} {d}" for b, d in self.counterexamples]
        out += [f"MEMBER {stage} {rendered}" for stage, rendered in self.members]
        out += [f"NOTE {text}" for text in self.notes]
        return out

    def render(self) -> str:
        return '\n'.join(self.lines()) + '\n'

    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_FAIL

    def write(self, path: Optional[str] = None) -> int:
        """Write to path (stdout when None) and return the exit code"""
        text = self.render()
        if not path:
            sys.stdout.write(text)
            return self.exit_code()
        try:
            with open(path, 'w', encoding='utf-8') as f:
                f.write(text)
        except OSError as e:
            raise InputError(f"cannot write report to {path}: {e}")
        return self.exit_code()
