"""Replay the 5-node broadcast walkthrough and print every node's table."""

from bloomclock import HashFamily, ScriptStep, compare, replay

SEED = 9918  # puts t1, t2, t3 on slots {1,4}, {0,1}, {1,6} with m=8, k=2
NODES = "ABCDE"
STEPS = [
    ScriptStep("A", "t1-event", ("B", "D", "E")),
    ScriptStep("B", "t2-event", ("A", "E")),
    ScriptStep("D", "t3-event", ("E", "C")),
    ScriptStep("E", "t4-event", ("A", "B", "C", "D")),
]


def main():
    run = replay(HashFamily(8, 2, SEED), NODES, STEPS)
    for node in NODES:
        print(node)
        for t, clock in run.table(node):
            print(f"  t{t}: {clock}")
    d3, e2 = run.clock_at("D", 3), run.clock_at("E", 2)
    print(f"D@t3 {d3} vs E@t2 {e2}: {compare(d3, e2).value}")


if __name__ == "__main__":
    main()
