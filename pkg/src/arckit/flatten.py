"""Hierarchy flattening.

Replaces every composed instance below the root by its atomic descendants,
rewiring pass-through connector chains to direct links. Because connectors
are delay-free and all delay lives in atomic components, flattening is
semantics-preserving: the flattened model produces the same trace on every
retained port (atomic ports keep their full dotted paths; composite
boundary ports disappear).

The code generators build on this: generated code exists per atomic
instance, composed components survive only as wiring tables.
"""

from __future__ import annotations

from .model import Connector, InstanceModel, InstanceNode, PortRef
from .wiring import ABSENT, ENV, PRODUCER, build_port_table


def flatten(model: InstanceModel) -> InstanceModel:
    root = model.root
    if root.behavior is not None:
        return model

    table = build_port_table(model)
    prefix = root.path + "."

    def flat_name(path: str) -> str:
        return path[len(prefix):]

    atoms = [n for n in model.nodes() if n.behavior is not None and n is not root]
    children = tuple(
        InstanceNode(
            path=n.path,
            instance_name=flat_name(n.path),
            definition=n.definition,
            ports=n.ports,
            config=n.config,
            behavior=n.behavior,
        )
        for n in atoms)

    connectors: list[Connector] = []
    for n in atoms:
        for port in n.ports:
            if port.direction != "in":
                continue
            driver = table.driver(n.path, port.name)
            if driver.kind == PRODUCER:
                connectors.append(Connector(
                    PortRef(flat_name(driver.path), driver.port),
                    PortRef(flat_name(n.path), port.name)))
            elif driver.kind == ENV:
                connectors.append(Connector(
                    PortRef(None, driver.port),
                    PortRef(flat_name(n.path), port.name)))
    for port in root.ports:
        if port.direction != "out":
            continue
        driver = table.driver(root.path, port.name)
        if driver.kind == PRODUCER:
            connectors.append(Connector(
                PortRef(flat_name(driver.path), driver.port),
                PortRef(None, port.name)))
        elif driver.kind == ENV:
            connectors.append(Connector(
                PortRef(None, driver.port), PortRef(None, port.name)))

    new_root = InstanceNode(
        path=root.path,
        instance_name=root.instance_name,
        definition=root.definition,
        ports=root.ports,
        config=root.config,
        children=children,
        connectors=tuple(connectors),
    )
    return InstanceModel(new_root)
