"""
📡 Wiretap LBB
==============

Location-based beamforming for Rician wiretap channels: secrecy outage
sweeps, optimal power split between the zero-forcing and Eve-aligned
beamformers, location-uncertainty averaging and Monte Carlo validation.

Run ``python wiretap_lbb.py --help`` for the subcommands.
"""

import os
import sys
import logging

from dotenv import load_dotenv
load_dotenv()

from src.utils import config

logging.basicConfig(
    level=os.getenv(config.ENV_LOG_LEVEL, "INFO").upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)

from src.cli.main import main

if __name__ == '__main__':
    sys.exit(main())
