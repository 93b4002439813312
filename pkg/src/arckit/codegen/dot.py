"""Architecture graph backend: one Graphviz digraph per model.

Atomic instances are boxes, composite instances become clusters, the root's
own ports show up as ovals at the top level, and every connector is one
directed edge labeled with the port type it carries.
"""

from __future__ import annotations

from typing import Mapping

from ..model import InstanceModel, InstanceNode
from . import GENERATED, GENERATOR_NAME, GENERATOR_VERSION, GeneratedFile, register_backend


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


class DotBackend:
    name = "dot"

    def generate(self, model: InstanceModel, options: Mapping[str, str]) -> list[GeneratedFile]:
        root = model.root
        lines = [
            f"// Generated by {GENERATOR_NAME} {GENERATOR_VERSION} for model "
            f"{root.definition} -- do not edit.",
            f"digraph {_quote(root.definition)} {{",
            "  rankdir=LR;",
            "  node [fontname=Helvetica];",
        ]

        def node_id(path: str) -> str:
            return _quote(path)

        def port_node_id(path: str, port: str) -> str:
            return _quote(f"{path}.{port}")

        def emit_instance(node: InstanceNode, indent: str) -> None:
            if node.behavior is not None:
                lines.append(f"{indent}{node_id(node.path)} "
                             f"[shape=box, label={_quote(node.instance_name)}];")
                return
            if node is not root:
                lines.append(f"{indent}subgraph {_quote('cluster_' + node.path)} {{")
                lines.append(f"{indent}  label={_quote(node.instance_name)};")
                inner = indent + "  "
            else:
                inner = indent
            for port in node.ports:
                lines.append(f"{inner}{port_node_id(node.path, port.name)} "
                             f"[shape=oval, label={_quote(port.name)}];")
            for child in node.children:
                emit_instance(child, inner)
            if node is not root:
                lines.append(f"{indent}}}")

        emit_instance(root, "  ")

        def endpoint(scope: InstanceNode, instance: str | None, port: str) -> tuple[str, InstanceNode | None]:
            if instance is None:
                return port_node_id(scope.path, port), scope
            child = scope.child(instance)
            if child is None:
                return _quote(f"{scope.path}.{instance}.{port}"), None
            if child.behavior is not None:
                return node_id(child.path), child
            return port_node_id(child.path, port), child

        def port_type(node: InstanceNode | None, port: str) -> str:
            if node is None:
                return "?"
            decl = node.port(port)
            return str(decl.type) if decl else "?"

        for node in model.nodes():
            for conn in node.connectors:
                src_id, src_node = endpoint(node, conn.source.instance, conn.source.port)
                dst_id, _ = endpoint(node, conn.target.instance, conn.target.port)
                label = port_type(src_node, conn.source.port)
                lines.append(f"  {src_id} -> {dst_id} [label={_quote(label)}];")

        lines.append("}")
        name = root.definition[:1].lower() + root.definition[1:]
        content = "\n".join(lines) + "\n"
        return [GeneratedFile(f"{name}.dot", content.encode("utf-8"), GENERATED)]


register_backend("dot", DotBackend)
