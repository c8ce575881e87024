"""From a ragged binary mask to clustered regions.

Starts with a mask containing a blob with holes, a small speck, and a pair of
nearby fragments.  Closing fills the holes, tracing turns components into
contours, the area filter drops the speck, clustering merges the fragment
pair, and a person box finally suppresses the cluster it covers.
"""

import numpy as np

from garmwatch import (BoundingBox, close, cluster_contours, exclude_persons,
                       filter_small, to_detections, trace_contours)
from garmwatch.frameio import PersonBoxes


def show(mask, title):
    print(title)
    for row in mask:
        print("   ", "".join(".#"[int(v)] for v in row))


mask = np.zeros((20, 44), dtype=bool)
mask[2:9, 3:13] = True             # blob with two holes punched in
mask[4, 6] = mask[6, 9] = False
mask[3, 30] = True                 # lone speck
mask[13:17, 6:12] = True           # fragment pair, 3 px apart
mask[13:17, 15:21] = True
mask[11:17, 30:40] = True          # separate garment across the frame

show(mask, "input mask (holes, a speck, split fragments):")

closed = close(mask, se_size=3)
show(closed, "\nafter closing with a 3x3 element (holes gone, gaps intact):")

contours = trace_contours(closed)
print(f"\ntraced {len(contours)} components:")
for c in contours:
    b = c.bbox
    print(f"  bbox ({b.x:2d},{b.y:2d}) {b.w}x{b.h}  area {c.area:3d}  "
          f"boundary {len(c.points)} px")

contours = filter_small(contours, min_area=4)
print(f"\narea filter (min_area=4) keeps {len(contours)} of them")

for gap in (1.0, 3.0, 6.0):
    clusters = cluster_contours(contours, "red", gap_threshold=gap)
    sizes = [len(c.members) for c in clusters]
    print(f"gap_threshold={gap:g}: {len(clusters)} clusters, members {sizes}")
# gap 3 reaches across the fragment pair's split; gap 6 also bridges the
# fragments up to the blob; the right-hand garment stays alone throughout

clusters = cluster_contours(contours, "red", gap_threshold=3.0)
persons = PersonBoxes(0, [BoundingBox(28, 9, 14, 9)])
kept = exclude_persons(clusters, persons)
print(f"\na person box over the right-hand garment drops it: "
      f"{len(clusters)} clusters -> {len(kept)}")

detections = to_detections(kept, frame_index=0, frame_area=44 * 20)
for det in detections:
    b = det.box
    print(f"  detection ({b.x},{b.y}) {b.w}x{b.h}  color {det.color}  "
          f"score {det.score:.3f}")
