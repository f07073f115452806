"""Import smoke test for the command-line parser."""


def test_import_cli():
    """Test that we can import the command-line parser with every command registered."""
    from pinned_auc.cli import build_parser
    parser = build_parser()
    assert parser.prog == "pinned-auc"

    args = parser.parse_args(["table1"])
    assert args.command == "table1"
    for command in ("generate", "stats", "score", "evaluate", "decompose", "skew-experiment", "compare"):
        assert command in parser.format_help()
