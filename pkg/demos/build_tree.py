"""Build an origin/destination tree from raw rows and query it.

Shows the two ingestion pieces (partition hierarchies plus a trip list), how
the alternating destination/origin levels are laid out, and how range queries
read aggregates at any pair of granularities.
"""

from inftda import build_tree, ingest_trips, parse_hierarchy

ORIGIN_ROWS = [
    ("north", "north.a"),
    ("north", "north.b"),
    ("south", "south.c"),
]
DEST_ROWS = [
    ("east", "east.x"),
    ("east", "east.y"),
    ("west", "west.z"),
]
TRIPS = [
    ("north.a", "east.x", 3),
    ("north.a", "east.y", 1),
    ("north.b", "west.z", 2),
    ("south.c", "east.y", 5),
]


def main() -> None:
    origin = parse_hierarchy(ORIGIN_ROWS)
    dest = parse_hierarchy(DEST_ROWS)
    table = ingest_trips(TRIPS, origin, dest)
    print(f"{table.n} trips over a {table.universe_size}-pair leaf universe")

    tree = build_tree(table, mode="destination")
    print(f"tree depth {tree.depth} (destination level splits first)\n")

    for depth in range(tree.depth + 1):
        ol, dl = tree.component_levels(depth)
        cells = ", ".join(f"{k}={v}" for k, v in sorted(tree.levels[depth].items()))
        print(f"depth {depth} (origin level {ol}, dest level {dl}): {cells}")

    # aggregates at mixed granularities, straight from the leaf counts
    print()
    print("north -> east:", tree.range_query("north", 1, "east", 1))
    print("north -> east.y:", tree.range_query("north", 1, "east.y", 2))
    print("all -> west:", tree.range_query("__all__", 0, "west", 1))


if __name__ == "__main__":
    main()
