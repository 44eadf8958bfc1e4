#!/usr/bin/env python3
# coding: UTF-8

from scripts.spinlab_cli import cli

if __name__ == '__main__':
    cli()
