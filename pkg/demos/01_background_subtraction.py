"""Watch the background model settle, flag an intruding object, then absorb it.

Builds a 40x30 gray scene, feeds it to BackgroundModel frame by frame, and
prints the foreground pixel count as the model converges.  A 8x8 block then
appears and stays put: it lights up immediately, and after enough frames the
model adopts it as background -- the absorption rate is set by history_length.
"""

import numpy as np

from garmwatch import BackgroundModel, Frame

W, H = 40, 30
HISTORY = 60

model = BackgroundModel(W, H, history_length=HISTORY)
gray = np.full((H, W, 3), 96, dtype=np.uint8)

print(f"scene {W}x{H}, history_length={HISTORY}")
print("\nphase 1: constant gray scene")
for i in range(30):
    fg = model.update(Frame(i, gray))
    if i % 6 == 0 or i == 29:
        print(f"  frame {i:3d}: {int(fg.sum()):4d} foreground pixels")
# the whole frame starts foreground (the model is born knowing nothing),
# then goes quiet once the gray component accumulates enough weight

print("\nphase 2: a red 8x8 block appears at (16, 11) and stays")
block = gray.copy()
block[11:19, 16:24] = (220, 40, 40)
appeared = None
absorbed = None
for i in range(30, 90):
    fg = model.update(Frame(i, block))
    count = int(fg.sum())
    if appeared is None and count > 0:
        appeared = i
    if appeared is not None and absorbed is None and count == 0:
        absorbed = i
    if i % 10 == 0:
        print(f"  frame {i:3d}: {count:4d} foreground pixels")

print(f"\nthe block lit up {8 * 8} pixels at frame {appeared} "
      f"and was absorbed into the background by frame {absorbed}")
print(f"(a component turns background once the weight ahead of it drops "
      f"below 0.9; that takes about 0.105 * history_length = "
      f"{0.105 * HISTORY:.0f} matched frames)")

# the per-pixel mixture is inspectable: the settled pixel carries the gray
# component plus the red one it just learned
px = (20, 15)
i = px[1] * W + px[0]
print(f"\ncomponents at pixel {px}:")
for k in range(int(model.ncomp[i])):
    w = model.weight[k, i]
    mean = model.mean[k, i]
    var = model.variance[k, i]
    print(f"  slot {k}: weight {w:.3f}  mean ({mean[0]:5.1f}, {mean[1]:5.1f}, "
          f"{mean[2]:5.1f})  variance {var:7.1f}")
