#!/usr/bin/env python3
"""
GAN Oversampler - Main CLI Interface
Balance minority classes with per-class GANs and measure the effect on a
downstream classifier
"""

import logging
import os
import sys
from pathlib import Path
from typing import Callable, Dict, Optional

import click

# Fix Windows Unicode encoding issues
if sys.platform == 'win32':
    os.environ['PYTHONIOENCODING'] = 'utf-8'

from core.orchestrator import PipelineOrchestrator
from core.resampler import GanOversampler
from data.dataset import load_csv, read_header
from report_maker.report_generator import ReportGenerator, metrics_table
from utils.config_loader import RunConfig, build_run_config, load_settings
from utils.errors import OutputDirNotEmpty, OversamplerError
from utils.logger import resolve_level, setup_logging

DEFAULT_SETTINGS = str(Path(__file__).resolve().parent / 'config' / 'config.yaml')

logger = logging.getLogger(__name__)


class OversamplerCLI(click.Group):
    """Click group that reports usage errors with exit code 1"""

    def main(self, *args, **kwargs):
        kwargs['standalone_mode'] = False
        try:
            return super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(1)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)


def common_options(command: Callable) -> Callable:
    """Flags shared by every command"""
    options = [
        click.option('--data', '-d', type=click.Path(dir_okay=False), help='Input CSV file with a header row'),
        click.option('--target', '-t', help='Name of the class-label column'),
        click.option('--config', '-c', 'config_path', type=click.Path(exists=True, dir_okay=False),
                     help='Experiment config (JSON or YAML) with GAN parameters'),
        click.option('--out', '-o', type=click.Path(file_okay=False), help='Output directory'),
        click.option('--seed', type=int, help='Seed for the GAN, the split and the classifier'),
        click.option('--n-jobs', type=int, help='Number of concurrent workers'),
        click.option('--force', is_flag=True, help='Write into a non-empty output directory'),
        click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def evaluation_options(command: Callable) -> Callable:
    """Flags of the commands that train a downstream classifier"""
    command = click.option('--split', help="Train/validation/test fractions, e.g. '0.6,0.2,0.2'")(command)
    command = click.option('--classifier', help='softmax-regression or gradient-boosted-trees')(command)
    return command


def _require(ctx: click.Context, **values):
    for name, value in values.items():
        if value is None:
            raise click.UsageError(f"Missing option '--{name}'.", ctx=ctx)


def _prepare_output(run: RunConfig):
    if run.out.exists() and any(run.out.iterdir()) and not run.force:
        raise OutputDirNotEmpty(f"Output directory {run.out} is not empty (use --force to write into it)")
    run.out.mkdir(parents=True, exist_ok=True)


def _execute(ctx: click.Context, settings_path: str, verbose: bool, options: Dict,
             work: Callable[[RunConfig, Dict], None]):
    """
    Load settings, build the run config and run one command

    Exit codes: 0 success, 1 configuration, 2 data, 3 training.
    """
    _require(ctx, data=options['data'], target=options['target'], out=options['out'])

    try:
        settings = load_settings(settings_path)
    except Exception as e:
        click.echo(f"Error loading configuration: {str(e)}", err=True)
        sys.exit(1)

    setup_logging(settings, resolve_level(settings, verbose))

    try:
        run = build_run_config(settings, **options)
        _prepare_output(run)
        work(run, settings)
        sys.exit(0)

    except OversamplerError as e:
        stage = f" [{e.stage}]" if e.stage else ""
        logger.debug("Command failed", exc_info=True)
        click.echo(f"Error{stage}: {e}", err=True)
        sys.exit(e.exit_code)
    except FileNotFoundError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)
    except KeyboardInterrupt:
        click.echo("\nRun interrupted by user", err=True)
        sys.exit(130)
    except Exception as e:
        logger.exception("Run failed")
        click.echo(f"\nError: {str(e)}", err=True)
        sys.exit(1)


@click.group(cls=OversamplerCLI)
@click.option(
    '--settings',
    type=click.Path(dir_okay=False),
    default=DEFAULT_SETTINGS,
    show_default=True,
    help='Application settings (logging, output names, split and classifier defaults)'
)
@click.pass_context
def main(ctx, settings):
    """
    GAN Oversampler - per-class GAN oversampling for imbalanced tabular data

    Examples:
        oversampler.py resample --data dc.csv --target amphetamine --out out/
        oversampler.py pipeline --data dc.csv --target amphetamine --out report/ --seed 7
        oversampler.py sweep --data dc.csv --target amphetamine --out sweep/ --max-trials 12
    """
    ctx.obj = {'settings': settings}


@main.command()
@common_options
@click.option('--save-models', is_flag=True, help='Also write each class GAN as .npz checkpoints')
@click.pass_context
def resample(ctx, data, target, config_path, out, seed, n_jobs, force, verbose, save_models):
    """Balance the whole CSV file and write balanced.csv with an __origin__ column"""

    def work(run: RunConfig, settings: Dict):
        dataset = load_csv(run.data, run.target)
        run.gan.check_layer_order()

        oversampler = GanOversampler(run.gan)
        balanced = oversampler.resample_dataset(dataset)

        header = read_header(run.data)
        ReportGenerator(settings).write_resample(
            balanced, oversampler, str(run.out), run.target,
            save_models=run.save_models, target_position=header.index(run.target),
        )

        click.echo(oversampler.plan_.to_table())
        click.echo(f"\n{balanced.n_original} original + {balanced.n_synthetic} synthetic rows written to {run.out}")

    _execute(ctx, ctx.obj['settings'], verbose, dict(
        data=data, target=target, config_path=config_path, out=out, seed=seed, n_jobs=n_jobs,
        force=force, save_models=save_models,
    ), work)


@main.command()
@common_options
@evaluation_options
@click.pass_context
def pipeline(ctx, data, target, config_path, out, seed, n_jobs, force, verbose, split, classifier):
    """Compare a classifier trained with and without GAN oversampling"""

    def work(run: RunConfig, settings: Dict):
        dataset = load_csv(run.data, run.target)
        orchestrator = PipelineOrchestrator(run.split, run.classifier, run.classifier_seed)
        report = orchestrator.run_pipeline(dataset, run.gan)

        written = ReportGenerator(settings).write_pipeline_report(report, str(run.out))
        click.echo(metrics_table(report))
        click.echo(f"\nReport saved to: {written['report_json']}")

    _execute(ctx, ctx.obj['settings'], verbose, dict(
        data=data, target=target, config_path=config_path, out=out, seed=seed, n_jobs=n_jobs,
        force=force, split=split, classifier=classifier,
    ), work)


@main.command()
@common_options
@evaluation_options
@click.option('--max-trials', type=int, help='Evaluate at most this many grid points')
@click.pass_context
def sweep(ctx, data, target, config_path, out, seed, n_jobs, force, verbose, split, classifier, max_trials):
    """Fine-tune the GAN parameters on validation macro-F1"""

    def work(run: RunConfig, settings: Dict):
        dataset = load_csv(run.data, run.target)
        orchestrator = PipelineOrchestrator(run.split, run.classifier, run.classifier_seed)
        best, trials = orchestrator.sweep(dataset, run.gan, run.max_trials, n_jobs=run.gan.n_jobs)

        ReportGenerator(settings).write_sweep(best, trials, str(run.out), run.split, run.classifier)
        failed = sum(1 for trial in trials if not trial.ok)
        winner = next(trial for trial in trials if trial.ok and trial.config == best)
        click.echo(f"{len(trials)} trial(s), {failed} failed; best trial {winner.index} "
                   f"with validation macro-F1 {winner.validation_macro_f1:.4f}")

    _execute(ctx, ctx.obj['settings'], verbose, dict(
        data=data, target=target, config_path=config_path, out=out, seed=seed, n_jobs=n_jobs,
        force=force, split=split, classifier=classifier, max_trials=max_trials,
    ), work)


if __name__ == '__main__':
    main()
