"""
RunContext manages the artifacts (JSON, CSV, text reports) of a single command run.

Each run gets a folder under `runs/` named after the command and a digest
of its resolved configuration, so identical inputs land in the same folder
and produce byte-identical files. Every write goes through a temporary file
and os.replace.
"""

import hashlib
import json
import os
import shutil
import tempfile
from pathlib import Path
from typing import Any


_PROJECT_ROOT = Path(__file__).parent.parent.parent.absolute()


def config_digest(payload: Any) -> str:
    """sha256 (first 12 hex digits) of the canonical JSON of payload."""
    text = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def atomic_write(path: Path, content: str) -> Path:
    """Write content to path via a temporary sibling and os.replace."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(content)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


class RunContext:
    """Context for a single command run.

    Attributes:
        run_id: "<command>-<digest>"
        artifacts_dir: Folder holding every artifact of this run
        artifacts: Registered artifact metadata (filename, path, type, description)
    """

    RUNS_BASE_DIR = _PROJECT_ROOT / "runs"

    def __init__(
        self,
        command: str,
        payload: Any = None,
        run_id: str | None = None,
        base_dir: Path | None = None,
    ):
        """Initialize a run context.

        Args:
            command: CLI subcommand name
            payload: Resolved configuration and seed; hashed into the run id
            run_id: Explicit run id (overrides the digest)
            base_dir: Base directory for runs. Defaults to the project's runs/ folder.
        """
        self.command = command
        self.digest = config_digest(payload)
        self.run_id = run_id or f"{command}-{self.digest}"
        self._base_dir = Path(base_dir).absolute() if base_dir else self.RUNS_BASE_DIR
        self.artifacts_dir = self._base_dir / self.run_id
        self.artifacts: list[dict[str, Any]] = []
        self.artifacts_dir.mkdir(parents=True, exist_ok=True)

    def get_artifact_path(self, filename: str) -> Path:
        return self.artifacts_dir / filename

    def register_artifact(self, filename: str, artifact_type: str = "file", description: str = "") -> Path:
        """Register an artifact and return the path it will be written to.

        Args:
            filename: Name of the artifact file
            artifact_type: 'json', 'csv', 'report' or 'file'
            description: Human-readable description
        """
        path = self.get_artifact_path(filename)
        self.artifacts = [a for a in self.artifacts if a["filename"] != filename]
        self.artifacts.append({
            "filename": filename,
            "path": str(path),
            "type": artifact_type,
            "description": description,
        })
        return path

    def write_text(self, filename: str, content: str, artifact_type: str = "file", description: str = "") -> Path:
        return atomic_write(self.register_artifact(filename, artifact_type, description), content)

    def write_json(self, filename: str, payload: Any, description: str = "") -> Path:
        content = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        return self.write_text(filename, content, "json", description)

    def write_manifest(self) -> Path:
        """manifest.json listing every registered artifact (relative names only)."""
        entries = [
            {"filename": a["filename"], "type": a["type"], "description": a["description"]}
            for a in self.artifacts
        ]
        content = json.dumps({"run_id": self.run_id, "artifacts": entries}, indent=2, sort_keys=True) + "\n"
        return atomic_write(self.get_artifact_path("manifest.json"), content)

    def cleanup(self) -> None:
        """Remove the artifacts directory and all contents."""
        if self.artifacts_dir.exists():
            shutil.rmtree(self.artifacts_dir)
            self.artifacts.clear()

    def __repr__(self) -> str:
        return f"RunContext(run_id='{self.run_id}', artifacts={len(self.artifacts)})"
