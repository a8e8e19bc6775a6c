"""Expected layout of the ECoG seizure recordings used for real-data runs.

The recordings are not redistributed with this package. They are a public
epileptic-seizure electrocorticography (ECoG) case-study dataset with 76
electrodes (an 8 x 8 cortical grid plus 12 depth/strip contacts) sampled
at 400 Hz.

To run ``topotrack track`` on one seizure, export it to CSV as:

* one row per time sample, in temporal order;
* 76 numeric columns, one per electrode, with an optional header row of
  channel names;
* typically 10 s before onset and 10 s after (8000 rows at 400 Hz).

and point a config at it::

    data:
      path: seizure1.csv
      sampling_rate: 400
      events: [4001]             # onset sample, 1-based
      snapshot_offsets_s: [-2.5, 2.5]
"""

from __future__ import annotations

N_ELECTRODES = 76
SAMPLING_RATE_HZ = 400.0


def fetch_ecog(dest):
    """Placeholder for a dataset downloader.

    There is no stable public URL this package can rely on, so nothing is
    downloaded; obtain the recordings separately and convert them as
    described in the module docstring.
    """
    raise NotImplementedError(
        "ECoG data is not bundled or downloaded automatically; see topotrack.data "
        f"for the expected CSV layout, then place the file at {dest}"
    )
