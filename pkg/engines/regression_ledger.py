import json
import logging
import os
from datetime import datetime, timezone
from typing import Dict, Optional

from .report import Report

logger = logging.getLogger(__name__)


class RegressionLedger:
    """Regression constants (enumeration counts, sweep totals) kept in a JSON file.

    The first run of a key records it; later runs compare against the record.
    """

    def __init__(self, path: Optional[str] = None):
        self.path = os.path.abspath(path or 'regression_counts.json')
        self.counts: Dict[str, int] = {}
        self.load()

    def load(self) -> None:
        try:
            if os.path.exists(self.path):
                with open(self.path, 'r', encoding='utf-8') as f:
                    data = json.load(f)
                self.counts = {str(k): int(v) for k, v in data.get('counts', {}).items()}
                logger.info(f"Loaded {len(self.counts)} regression constants from {self.path}")
        except (OSError, ValueError, AttributeError) as e:
            logger.error(f"Error loading regression ledger {self.path}: {e}")
            self.counts = {}

    def save(self) -> None:
        data = {
            'counts': dict(sorted(self.counts.items())),
            'last_updated': datetime.now(timezone.utc).isoformat(),
            'description': 'Regression constants recorded on first run',
        }
        try:
            with open(self.path, 'w', encoding='utf-8') as f:
                json.dump(data, f, indent=2)
            logger.info(f"Saved {len(self.counts)} regression constants to {self.path}")
        except OSError as e:
            logger.error(f"Error saving regression ledger {self.path}: {e}")

    def expect(self, key: str, value: int) -> bool:
        """Record value on first sight; afterwards report whether it still matches"""
        recorded = self.counts.get(key)
        if recorded is None:
            self.counts[key] = value
            self.save()
            return True
        if recorded != value:
            logger.warning(f"Regression constant {key} changed: recorded {recorded}, now {value}")
            return False
        return True

    def check_counts(self, report: Report, prefix: str) -> None:
        """Compare every COUNT of the report under `prefix:<key>`"""
        for key, value in list(report.counts.items()):
            if key == 'counterexamples':
                continue
            report.check(f"regression:{prefix}:{key}", self.expect(f"{prefix}:{key}", value))
