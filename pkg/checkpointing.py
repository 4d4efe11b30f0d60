"""
Checkpointing Module
=====================

Stores finished benchmark replications so an interrupted run can resume
without recomputing them.

Features:
- One pickle per replication (scores + failures), plus a CSV copy of the scores
- metadata.json index with timestamps and a fingerprint of the run configuration
- Refuses to resume a run whose configuration has changed
- Latest-run discovery for --resume
"""

import json
import pickle
import shutil
from datetime import datetime
from pathlib import Path
from typing import Any, Optional

import pandas as pd
from tqdm import tqdm

from config import config


class CheckpointMismatchError(ValueError):
    """Stored checkpoints belong to a different run configuration."""


class CheckpointManager:
    """Per-run store of completed benchmark stages."""

    def __init__(self, run_id: Optional[str] = None, fingerprint: Optional[str] = None,
                 base_dir: Optional[Path] = None, verbose: bool = True):
        """
        Args:
            run_id: identifier of the run (default: timestamp)
            fingerprint: digest of the run configuration; must match any stored one
            base_dir: parent directory for runs (default: config.CHECKPOINT_DIR)
            verbose: print a line for each saved stage
        """
        self.run_id = run_id or datetime.now().strftime('%Y%m%d_%H%M%S')
        self.checkpoint_dir = Path(base_dir or config.CHECKPOINT_DIR) / self.run_id
        self.checkpoint_dir.mkdir(parents=True, exist_ok=True)
        self.verbose = verbose

        self.metadata_file = self.checkpoint_dir / "metadata.json"
        self.metadata = self._load_metadata()

        stored = self.metadata.get('fingerprint')
        if fingerprint is not None:
            if stored is not None and stored != fingerprint:
                raise CheckpointMismatchError(
                    f"Run {self.run_id} was started with a different configuration; "
                    "start a new run instead of resuming"
                )
            self.metadata['fingerprint'] = fingerprint
            self._save_metadata()

    def _load_metadata(self) -> dict:
        if self.metadata_file.exists():
            try:
                with open(self.metadata_file, 'r') as f:
                    payload = json.load(f)
                payload.setdefault('stages', {})
                return payload
            except (OSError, json.JSONDecodeError):
                return {'stages': {}}
        return {'stages': {}}

    def _save_metadata(self):
        with open(self.metadata_file, 'w') as f:
            json.dump(self.metadata, f, indent=2, sort_keys=True)

    @property
    def stages(self) -> dict:
        return self.metadata['stages']

    def save_checkpoint(self, stage: str, data: Any, description: str = ""):
        """
        Save one stage.

        Args:
            stage: stage name, e.g. 'replication_0007'
            data: (records, failures) pair of dict lists, or any picklable object
            description: free-text note stored in the index
        """
        checkpoint_file = self.checkpoint_dir / f"{stage}.pkl"
        try:
            with open(checkpoint_file, 'wb') as f:
                pickle.dump(data, f)
            if isinstance(data, tuple) and data and isinstance(data[0], list):
                pd.DataFrame(data[0]).to_csv(checkpoint_file.with_suffix('.csv'), index=False)

            self.stages[stage] = {
                'timestamp': datetime.now().isoformat(),
                'description': description,
                'file': checkpoint_file.name,
            }
            self._save_metadata()
            if self.verbose:
                tqdm.write(f"💾 Checkpoint saved: {stage}")
        except (OSError, pickle.PicklingError) as e:
            tqdm.write(f"⚠️  Failed to save checkpoint for {stage}: {e}")

    def load_checkpoint(self, stage: str) -> Optional[Any]:
        """Load a stage, or None if it is missing or unreadable."""
        info = self.stages.get(stage)
        if info is None:
            return None
        checkpoint_file = self.checkpoint_dir / info['file']
        if not checkpoint_file.exists():
            return None
        try:
            with open(checkpoint_file, 'rb') as f:
                return pickle.load(f)
        except (OSError, pickle.UnpicklingError, EOFError) as e:
            tqdm.write(f"⚠️  Failed to load checkpoint for {stage}: {e}")
            return None

    def has_checkpoint(self, stage: str) -> bool:
        return stage in self.stages

    def list_checkpoints(self) -> dict:
        return dict(self.stages)

    def clear_checkpoints(self):
        """Delete this run's directory."""
        if self.checkpoint_dir.exists():
            shutil.rmtree(self.checkpoint_dir)
            print(f"🗑️  Cleared checkpoints for run {self.run_id}")


def find_latest_run(base_dir: Optional[Path] = None) -> Optional[str]:
    """Most recent run directory name (run ids sort by timestamp)."""
    checkpoint_base = Path(base_dir or config.CHECKPOINT_DIR)
    if not checkpoint_base.exists():
        return None
    runs = sorted(d.name for d in checkpoint_base.iterdir() if d.is_dir())
    return runs[-1] if runs else None


def resume_from_checkpoint(fingerprint: Optional[str] = None,
                           base_dir: Optional[Path] = None) -> Optional[CheckpointManager]:
    """
    Reopen the most recent run if it has stored stages.

    Returns:
        CheckpointManager, or None when there is nothing to resume
    """
    latest_run = find_latest_run(base_dir)
    if not latest_run:
        print("📝 No previous checkpoints found")
        return None

    manager = CheckpointManager(run_id=latest_run, fingerprint=fingerprint, base_dir=base_dir)
    if not manager.stages:
        print("📝 No valid checkpoints in latest run")
        return None

    print(f"🔄 Resuming run {latest_run}: {len(manager.stages)} replications already done")
    return manager


if __name__ == "__main__":
    manager = CheckpointManager(run_id="demo_run")
    manager.save_checkpoint('replication_0000', ([{'estimator': 'truth', 'ari': 1.0}], []), "demo")
    print(manager.load_checkpoint('replication_0000'))
    manager.clear_checkpoints()
