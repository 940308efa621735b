#!/usr/bin/env python
import os
import sys

COV = None
if os.environ.get('FLASK_COVERAGE'):
    import coverage
    COV = coverage.Coverage(branch=True, source=['app'])
    COV.start()


def import_env(path='.env'):
    """Set environment variables from NAME=value lines. Blank lines and lines starting with # are skipped."""

    if not os.path.exists(path):
        return
    print('Importing environment from {path}...'.format(path=path))
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith('#') or '=' not in line:
                continue
            name, value = line.split('=', 1)
            os.environ[name.strip()] = value.strip()


import_env()

import click
from flask.cli import FlaskGroup

from app import create_app


def make_app():
    return create_app(os.getenv('GATEOPT_CONFIG') or 'development')


cli = FlaskGroup(create_app=make_app, add_default_commands=False,
                 help='Airport gate assignment: instance generation, calibration, solving and scenario comparison.')


def report_coverage():
    COV.stop()
    COV.save()
    print('Coverage Summary:')
    COV.report()
    covdir = os.path.join(os.path.abspath(os.path.dirname(__file__)), 'tmp', 'coverage')
    COV.html_report(directory=covdir)
    print('HTML version: file://{dir}/index.html'.format(dir=covdir))
    COV.erase()


@cli.command()
@click.option('--coverage', is_flag=True, help='Measure the test coverage.')
def test(coverage):
    """Run the unit tests."""

    if coverage and not os.environ.get('FLASK_COVERAGE'):
        # restart, so that coverage is measured from the first import on
        os.environ['FLASK_COVERAGE'] = '1'
        os.execvp(sys.executable, [sys.executable] + sys.argv)
    import unittest
    suite = unittest.TestLoader().discover('tests', top_level_dir='.')
    outcome = unittest.TextTestRunner(verbosity=2).run(suite)
    if COV:
        report_coverage()
    sys.exit(0 if outcome.wasSuccessful() else 1)


if __name__ == '__main__':
    cli()
