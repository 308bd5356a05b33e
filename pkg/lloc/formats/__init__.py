from .text import (
    dump_wlloc,
    load_wlloc,
    parse_embedding,
    parse_instance,
    read_embedding,
    read_instance,
    serialize_embedding,
    serialize_instance,
    write_embedding,
    write_instance,
)
from .report import bench_csv, model_json, report_json

__all__ = [
    "dump_wlloc",
    "load_wlloc",
    "parse_embedding",
    "parse_instance",
    "read_embedding",
    "read_instance",
    "serialize_embedding",
    "serialize_instance",
    "write_embedding",
    "write_instance",
    "bench_csv",
    "model_json",
    "report_json",
]
