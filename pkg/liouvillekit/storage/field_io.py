"""
场的序列化：扁平 CSV 与带格点描述的 JSON 信封

CSV 布局：第一行为 nx,ny,nt，之后按索引顺序每行一个值（17 位有效数字）。
"""

import io
import json
from pathlib import Path
from typing import Literal, Union

import numpy as np

from liouvillekit.exceptions import ContractError
from liouvillekit.lattice.fields import ScalarField, SpaceTimeField, VectorField
from liouvillekit.schemas.lattice import LatticeSpec

Field = Union[ScalarField, SpaceTimeField, VectorField]
FieldKind = Literal["scalar", "spacetime", "vector"]

_KINDS = {ScalarField: "scalar", SpaceTimeField: "spacetime", VectorField: "vector"}
_CLASSES = {v: k for k, v in _KINDS.items()}


def field_kind(field: Field) -> FieldKind:
    return _KINDS[type(field)]


def _shape_for(kind: FieldKind, spec: LatticeSpec) -> tuple:
    if kind == "scalar":
        return spec.shape
    if kind == "vector":
        return (2,) + spec.shape
    return spec.spacetime_shape


def to_csv(field: Field) -> str:
    """序列化为扁平 CSV 文本"""
    spec = field.spec
    buffer = io.StringIO()
    buffer.write(f"{spec.nx},{spec.ny},{spec.nt}\n")
    np.savetxt(buffer, field.values.reshape(-1), fmt="%.17g")
    return buffer.getvalue()


def from_csv(text: str, kind: FieldKind, a: float = 1.0, dt: float = 1.0) -> Field:
    """
    从扁平 CSV 文本恢复场

    Args:
        text: CSV 文本
        kind: 场类型（值个数无法唯一区分类型）
        a: 格距（CSV 中不保存）
        dt: 时间步长（CSV 中不保存）
    """
    lines = text.strip().splitlines()
    if not lines:
        raise ContractError("empty field CSV")
    try:
        nx, ny, nt = (int(token) for token in lines[0].split(","))
    except ValueError as e:
        raise ContractError(f"malformed field CSV header: {lines[0]!r}") from e

    spec = LatticeSpec(nx=nx, ny=ny, nt=nt, a=a, dt=dt)
    values = np.loadtxt(io.StringIO("\n".join(lines[1:])), dtype=float, ndmin=1)
    shape = _shape_for(kind, spec)
    if values.size != int(np.prod(shape)):
        raise ContractError(
            f"field CSV holds {values.size} values, {kind} on this lattice needs {int(np.prod(shape))}"
        )
    return _CLASSES[kind](spec, values.reshape(shape))


def to_json(field: Field) -> str:
    """序列化为 JSON 信封（内嵌格点描述）"""
    envelope = {
        "kind": field_kind(field),
        "spec": field.spec.model_dump(),
        "values": [float(v) for v in field.values.reshape(-1)],
    }
    return json.dumps(envelope)


def from_json(text: str) -> Field:
    """从 JSON 信封恢复场"""
    envelope = json.loads(text)
    kind = envelope["kind"]
    if kind not in _CLASSES:
        raise ContractError(f"unknown field kind {kind!r}")
    spec = LatticeSpec(**envelope["spec"])
    values = np.asarray(envelope["values"], dtype=float)
    return _CLASSES[kind](spec, values.reshape(_shape_for(kind, spec)))


def save_field(field: Field, path: Union[str, Path]) -> Path:
    """按扩展名写入 .csv 或 .json"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = to_json(field) if path.suffix == ".json" else to_csv(field)
    path.write_text(text, encoding="utf-8")
    return path
