"""Reasoning services: parser, classical tableau, model finder, defeasible engine, postulate checkers."""
