"""Command line entry points: serve, replay, validate, route."""

from __future__ import annotations

import sys

import click

from .config import load_config
from .world import ParseError, ValidationError, find_artwork, load_museum


def _config(config_path, **overrides):
    try:
        return load_config(config_path, **overrides)
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))


@click.group()
def main():
    """Virtual museum tour guide engine."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="TOML/JSON config file.")
@click.option("--museum", type=click.Path(), default=None, help="Museum content file.")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--mode", type=click.Choice(["scripted", "live"]), default=None)
@click.option("--static-dir", type=click.Path(), default=None, help="Web client bundle to serve at /.")
def serve(config_path, museum, host, port, mode, static_dir):
    """Run the session server."""
    from . import service

    cfg = _config(config_path, museum=museum, host=host, port=port, mode=mode, static_dir=static_dir)
    try:
        service.serve(cfg)
    except (ParseError, ValidationError, OSError) as exc:
        click.echo(f"startup failed: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.argument("transcript", type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--museum", type=click.Path(), default=None)
@click.option("--mode", type=click.Choice(["scripted", "live"]), default=None)
def replay(transcript, config_path, museum, mode):
    """Replay a transcript and check its expectations."""
    from . import service

    cfg = _config(config_path, museum=museum, mode=mode)
    try:
        code = service.replay(transcript, cfg)
    except FileNotFoundError as exc:
        click.echo(f"cannot read transcript: {exc}", err=True)
        sys.exit(2)
    sys.exit(code)


@main.command()
@click.argument("museum", type=click.Path())
def validate(museum):
    """Load a museum file and report content violations."""
    try:
        world = load_museum(museum)
    except FileNotFoundError as exc:
        click.echo(f"cannot read museum file: {exc}", err=True)
        sys.exit(2)
    except (ParseError, ValidationError) as exc:
        click.echo(f"invalid museum: {exc}", err=True)
        sys.exit(1)
    w, h = world.bounds
    click.echo(f"{len(world.artworks)} artworks, all reachable")
    click.echo(f"bounds {w} x {h} m, grid {world.grid.width} x {world.grid.height} cells")
    sys.exit(0)


@main.command()
@click.option("--from", "from_pos", required=True, help="Start position X,Y in meters.")
@click.option("--to", "target", required=True, help="Destination artwork id or name.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--museum", type=click.Path(), default=None)
def route(from_pos, target, config_path, museum):
    """Plan and print a path (debugging aid)."""
    from . import nav

    cfg = _config(config_path, museum=museum)
    world = load_museum(cfg.museum)
    try:
        x, y = (float(part) for part in from_pos.split(","))
    except ValueError:
        raise click.ClickException("--from expects X,Y (example: 0,0)")
    art = find_artwork(world, target)
    if art is None:
        raise click.ClickException(f"unknown artwork {target!r}")
    try:
        path = nav.plan_path(world, (x, y), art)
    except (nav.Unreachable, ValueError) as exc:
        click.echo(f"routing failed: {exc}", err=True)
        sys.exit(1)
    click.echo(f"route to {art.name} ({art.id}): grid length {path.length:.2f} m, walk length {path.smoothed_length:.2f} m")
    for px, py in path.smoothed:
        click.echo(f"  {px:.2f}, {py:.2f}")
    sys.exit(0)


if __name__ == "__main__":
    main()
