# criterion number -> formatted result line, filled by test_acceptance.py
RESULTS: dict[int, str] = {}
