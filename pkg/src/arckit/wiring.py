"""Connector resolution over an instance tree.

Connectors are delay-free wires; all delay lives inside atomic components.
Every port therefore has exactly one ultimate driver: the pending output of
an atomic instance, an environment value fed to a root in-port, or nothing
(the port reads the absence token). Pass-through chains across composite
boundaries are collapsed here once so the simulator, the flattener and the
code generators all agree on the wiring.

A chain of connectors that loops through composite boundaries without ever
passing an atomic component carries no messages; its ports resolve to
``absent`` (the least fixed point of delay-free propagation).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import InstanceModel, InstanceNode, PortDecl


@dataclass(frozen=True)
class Driver:
    """Ultimate source of a port's value.

    kind: "producer" (atomic out-port), "env" (root in-port), or "absent".
    """

    kind: str
    path: str = ""
    port: str = ""

    @property
    def key(self) -> str:
        return f"{self.path}.{self.port}"


PRODUCER = "producer"
ENV = "env"
ABSENT = "absent"


@dataclass(frozen=True)
class PortTable:
    """Every port of every instance, with its resolved driver."""

    keys: tuple[str, ...]  # sorted "<path>.<port>"
    decls: dict[str, PortDecl]
    drivers: dict[str, Driver]

    def driver(self, path: str, port: str) -> Driver:
        return self.drivers[f"{path}.{port}"]


def build_port_table(model: InstanceModel) -> PortTable:
    root = model.root
    parents: dict[str, InstanceNode | None] = {root.path: None}
    for node in model.nodes():
        for child in node.children:
            parents[child.path] = node

    decls: dict[str, PortDecl] = {}
    for node in model.nodes():
        for port in node.ports:
            decls[f"{node.path}.{port.name}"] = port

    resolving: dict[str, Driver | None] = {}

    def connector_into(scope: InstanceNode, instance: str | None, port: str):
        for conn in scope.connectors:
            if conn.target.instance == instance and conn.target.port == port:
                return conn
        return None

    def resolve(node: InstanceNode, port: PortDecl) -> Driver:
        key = f"{node.path}.{port.name}"
        cached = resolving.get(key, "missing")
        if cached is None:
            return Driver(ABSENT)  # connector-only cycle
        if cached != "missing":
            return cached
        resolving[key] = None

        driver = Driver(ABSENT)
        if port.direction == "out" and node.is_atomic:
            driver = Driver(PRODUCER, node.path, port.name)
        elif port.direction == "in" and node is root:
            driver = Driver(ENV, node.path, port.name)
        else:
            if port.direction == "in":
                scope = parents[node.path]
                conn = connector_into(scope, node.instance_name, port.name) if scope else None
            else:
                scope = node
                conn = connector_into(scope, None, port.name)
            if conn is not None:
                if conn.source.instance is None:
                    src_node, src_port = scope, scope.port(conn.source.port)
                else:
                    src_node = scope.child(conn.source.instance)
                    src_port = src_node.port(conn.source.port) if src_node else None
                if src_node is not None and src_port is not None:
                    driver = resolve(src_node, src_port)

        resolving[key] = driver
        return driver

    drivers = {}
    for node in model.nodes():
        for port in node.ports:
            drivers[f"{node.path}.{port.name}"] = resolve(node, port)

    return PortTable(tuple(sorted(decls)), decls, drivers)
