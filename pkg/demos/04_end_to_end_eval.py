"""Synthesize a scene, run the full pipeline, and score the detections.

Two garments drift across a noisy gray background while a person carries a
third; the pipeline should find the two free-standing garments and suppress
the worn one.  Scoring compares detections to the ground truth the renderer
emitted, then sweeps the IoU threshold.

The command line equivalent, given files on disk:
    garmwatch synth  --scene scene.txt --out-frames frames/ --out-gt gt.jsonl
    garmwatch detect --frames frames/ --config pipeline.cfg --out det.jsonl
    garmwatch eval   --det det.jsonl --gt gt.jsonl --tau 0.5
    garmwatch curve  --det det.jsonl --gt gt.jsonl
"""

from garmwatch import (PipelineConfig, SceneObject, ScenePerson, SceneSpec,
                       evaluate, generate_frames, pr_curve, process_sequence,
                       warmup_prefix)

spec = SceneSpec(
    width=160, height=120, nframes=60, background=(96, 96, 96),
    noise_sigma=4.0, seed=7,
    objects=[
        SceneObject(color=(220, 30, 30), size=(16, 16), start=(10, 12),
                    velocity=(1, 0)),
        SceneObject(color=(40, 40, 230), size=(16, 16), start=(130, 50),
                    velocity=(-1, 0)),
        SceneObject(color=(30, 200, 30), size=(14, 14), start=(21, 91),
                    velocity=(1, 0)),
    ],
    persons=[
        # walks under the green garment the whole time
        ScenePerson(size=(22, 22), start=(17, 87), velocity=(1, 0)),
    ])
spec = warmup_prefix(spec, 40)  # lead-in frames so the model settles first

frames, annotations, persons = [], [], []
for frame, annotation, person_boxes in generate_frames(spec):
    frames.append(frame)
    annotations.append(annotation)
    persons.append(person_boxes)
print(f"rendered {len(frames)} frames "
      f"({spec.width}x{spec.height}, noise sigma 4, 40 warmup + 60 active)")

config = PipelineConfig(history_length=200, warmup_frames=40)
detections = process_sequence(frames, persons, config)
by_color = {}
for det in detections:
    by_color[det.color] = by_color.get(det.color, 0) + 1
print(f"pipeline returned {len(detections)} detections: {by_color}")
print("(the green garment rides on the person, so the person filter eats it)")

# with the worn garment excluded by design, score against the other two
worn_y = 91
free = [type(a)(a.frame_index, [b for b in a.boxes if b.y2 - b.h != worn_y])
        for a in annotations]
report = evaluate(detections, free, tau=0.5)
c = report.counts
print(f"\nagainst the two free garments at tau=0.5:")
print(f"  tp={c.tp} fp={c.fp} fn={c.fn}  precision={report.precision:.3f} "
      f"recall={report.recall:.3f}  mean IoU={report.mean_iou:.3f}")

print("\nthreshold sweep:")
print("  tau   precision  recall")
for tau, precision, recall in pr_curve(detections, free,
                                       [0.3, 0.5, 0.7, 0.9, 0.95]):
    print(f"  {tau:.2f}  {precision:9.3f}  {recall:6.3f}")
