"""
Level-set meshes on disk: delimited text with a provenance header, and OBJ triangle meshes in
the (Re α, Im α, k) embedding.
"""
from pathlib import Path
from typing import List, Tuple

import numpy as np
import pandas as pd
import trimesh

from .log import main_logger as logger
from .moduli import LevelSetMesh, format_rational

COLUMNS = ['p', 'q', 'k', 'u_tilde', 'v_tilde', 're_alpha', 'im_alpha', 're_beta', 'im_beta']
FLOAT_FORMAT = '%.17g'


def mesh_frame(mesh: LevelSetMesh) -> pd.DataFrame:
    p, q = format_rational(mesh.p), format_rational(mesh.q)
    rows = []
    for record in mesh.records:
        if record.ok:
            mp, bp = record.point, record.bp
            rows.append([p, q, record.k, mp.u_tilde, mp.v_tilde, bp.alpha.real, bp.alpha.imag, bp.beta.real, bp.beta.imag])
        else:
            rows.append([p, q, record.k] + [np.nan] * 6)
    return pd.DataFrame(rows, columns=COLUMNS)


def provenance(mesh: LevelSetMesh, config=None) -> List[str]:
    lines = [
        'level set p=%s q=%s k_grid=%d angle_grid=%d span=%.17g' % (
            format_rational(mesh.p), format_rational(mesh.q), len(mesh.k_values), mesh.angle_grid, mesh.angle_span),
        'deck turns %.17g, q shift per turn %s' % (mesh.deck_turns, format_rational(mesh.p - 1)),
    ]
    if config is not None:
        lines.append(' '.join('%s=%s' % (f, getattr(config, f)) for f in config.fields()))
    if mesh.gaps:
        lines.append('partial: gaps at %s' % ' '.join('%d,%d' % g for g in mesh.gaps))
    return lines


def write_mesh_csv(mesh: LevelSetMesh, path, config=None) -> Path:
    path = Path(path)
    with path.open('w', newline='') as f:
        for line in provenance(mesh, config):
            f.write('# %s\n' % line)
        mesh_frame(mesh).to_csv(f, index=False, float_format=FLOAT_FORMAT, na_rep='nan')
    logger.debug('wrote %d records to %s', len(mesh.records), path)
    return path


def read_mesh_csv(path) -> Tuple[List[str], pd.DataFrame]:
    path = Path(path)
    header = []
    with path.open() as f:
        for line in f:
            if not line.startswith('#'):
                break
            header.append(line[1:].strip())
    frame = pd.read_csv(path, comment='#', dtype={'p': str, 'q': str})
    return header, frame


def mesh_geometry(mesh: LevelSetMesh) -> trimesh.Trimesh:
    """
    Vertices (Re α, Im α, k); each grid cell with four solved corners becomes two triangles.
    """
    width = mesh.angle_grid
    index = {}
    vertices = []
    for i, record in enumerate(mesh.records):
        if record.ok:
            index[i] = len(vertices)
            vertices.append((record.bp.alpha.real, record.bp.alpha.imag, record.k))
    faces = []
    for row in range(len(mesh.k_values) - 1):
        for col in range(width - 1):
            corners = [row * width + col, row * width + col + 1, (row + 1) * width + col + 1, (row + 1) * width + col]
            if all(c in index for c in corners):
                a, b, c, d = (index[c] for c in corners)
                faces.extend([(a, b, c), (a, c, d)])
    return trimesh.Trimesh(vertices=np.array(vertices, dtype=float).reshape(-1, 3),
                           faces=np.array(faces, dtype=int).reshape(-1, 3), process=False)


def write_mesh_obj(mesh: LevelSetMesh, path) -> Path:
    path = Path(path)
    geometry = mesh_geometry(mesh)
    path.write_text(geometry.export(file_type='obj'))
    logger.debug('wrote %d vertices, %d faces to %s', len(geometry.vertices), len(geometry.faces), path)
    return path
