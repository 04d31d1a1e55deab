"""
Report Generator
Writes the artifacts of each command: balanced data, plans, training logs,
pipeline reports and sweep results
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from tabulate import tabulate

from classifiers.spec import ClassifierSpec
from core.orchestrator import AUGMENTED, BASELINE, PipelineReport, TrialResult
from core.resampler import BalancedDataset, GanOversampler
from data.dataset import write_csv
from data.splitting import SplitSpec
from gan.config import GanConfig
from gan.trainer import save_gan_model

ORIGIN_COLUMN = '__origin__'

DEFAULT_FILES = {
    'balanced': 'balanced.csv',
    'plan_json': 'plan.json',
    'plan_text': 'plan.txt',
    'train_logs_dir': 'train_logs',
    'models_dir': 'models',
    'report_json': 'report.json',
    'report_text': 'report.txt',
    'trials': 'trials.json',
    'best_config': 'best_config.json',
}

METHOD_NAMES = {BASELINE: 'Baseline', AUGMENTED: 'GAN'}
METRICS = (('precision', 'Precision'), ('recall', 'Recall'), ('f1', 'F1'))


def dump_json(data: Any, path: Path) -> str:
    """UTF-8, 2-space indentation, sorted keys, trailing newline"""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
        f.write('\n')
    return str(path)


def _write_text(text: str, path: Path) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text.rstrip('\n') + '\n')
    return str(path)


def safe_name(label: Any) -> str:
    """File-name friendly form of a class label"""
    return re.sub(r'[^A-Za-z0-9_.-]+', '_', str(label)) or '_'


def metrics_table(report: PipelineReport, digits: int = 3) -> str:
    """
    Methods as rows, one column per (metric, class) pair

    The best value of every column is marked with '*'; ties are all marked.
    """
    methods = (BASELINE, AUGMENTED)
    headers = ['Method']
    columns: List[List[float]] = []
    for key, title in METRICS:
        for label in report.class_order:
            headers.append(f"{title} (class {label})")
            columns.append([getattr(report.metrics(method)[label], key) for method in methods])

    rows = [[METHOD_NAMES[method]] for method in methods]
    for values in columns:
        best = max(round(v, digits) for v in values)
        for row, value in zip(rows, values):
            mark = '*' if round(value, digits) == best else ''
            row.append(f"{value:.{digits}f}{mark}")
    return tabulate(rows, headers=headers, tablefmt='github', disable_numparse=True)


class ReportGenerator:
    """Writes command outputs into an output directory"""

    def __init__(self, settings: Optional[Dict] = None):
        """
        Initialize the report generator

        Args:
            settings: Application settings; `output.files` overrides file names
        """
        files = ((settings or {}).get('output') or {}).get('files') or {}
        self.files = {**DEFAULT_FILES, **files}
        self.logger = logging.getLogger(__name__)

    def write_resample(self, balanced: BalancedDataset, oversampler: GanOversampler, output_dir: str,
                       target_column: str, save_models: bool = False,
                       target_position: Optional[int] = None) -> Dict[str, Any]:
        """
        Write balanced.csv, the plan summary, per-class training logs and optionally the models

        Returns:
            Mapping of artifact name to written path(s)
        """
        out = Path(output_dir)
        written: Dict[str, Any] = {}

        written['balanced'] = write_csv(balanced.dataset, out / self.files['balanced'], target_column,
                                        extra_columns={ORIGIN_COLUMN: list(balanced.origin)},
                                        target_position=target_position)
        written['plan_json'] = dump_json(oversampler.plan_.to_dict(), out / self.files['plan_json'])
        written['plan_text'] = _write_text(oversampler.plan_.to_table(), out / self.files['plan_text'])

        written['train_logs'] = [
            log.to_csv(out / self.files['train_logs_dir'] / f"{safe_name(label)}.csv")
            for label, log in oversampler.train_logs_.items()
        ]
        if save_models:
            written['models'] = [
                save_gan_model(model, out / self.files['models_dir'] / safe_name(label))
                for label, model in oversampler.models_.items()
            ]

        self.logger.info(f"Balanced data written to {written['balanced']} "
                         f"({balanced.n_original} original + {balanced.n_synthetic} synthetic rows)")
        return written

    def write_pipeline_report(self, report: PipelineReport, output_dir: str) -> Dict[str, str]:
        """Write report.json and the report.txt metrics table"""
        out = Path(output_dir)
        data = report.to_dict()

        lines = [
            metrics_table(report),
            '',
            tabulate(
                [[METHOD_NAMES[m], f"{report.validation_macro_f1[m]:.4f}",
                  f"{report.metrics(m).macro_f1:.4f}"] for m in (BASELINE, AUGMENTED)],
                headers=['Method', 'Validation macro-F1', 'Test macro-F1'],
                tablefmt='github',
                disable_numparse=True,
            ),
            '',
            f"Split sizes: train={report.split_sizes['train']}, val={report.split_sizes['val']}, "
            f"test={report.split_sizes['test']}",
            f"Seeds: gan={report.seeds['gan']}, split={report.seeds['split']}, "
            f"classifier={report.seeds['classifier']}",
        ]

        written = {
            'report_json': dump_json(data, out / self.files['report_json']),
            'report_text': _write_text('\n'.join(lines), out / self.files['report_text']),
        }
        self.logger.info(f"Pipeline report written to {written['report_json']}")
        return written

    def write_sweep(self, best: GanConfig, trials: Sequence[TrialResult], output_dir: str,
                    split: Optional[SplitSpec] = None, spec: Optional[ClassifierSpec] = None) -> Dict[str, str]:
        """
        Write trials.json (every trial) and best_config.json

        best_config.json carries the split and classifier sections too, so
        `pipeline --config best_config.json` repeats the winning trial.
        """
        out = Path(output_dir)
        best_config = best.to_dict(include_n_jobs=False)
        if split is not None:
            best_config['split'] = split.to_dict()
        if spec is not None:
            best_config['classifier'] = spec.to_dict()

        written = {
            'trials': dump_json([trial.to_dict() for trial in trials], out / self.files['trials']),
            'best_config': dump_json(best_config, out / self.files['best_config']),
        }
        self.logger.info(f"Sweep results written to {written['trials']}")
        return written
