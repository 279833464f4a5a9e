"""Embedded 114-week operating-room-holds case study.

Weekly counts of OR exit delays ("holds") in a surgery service, with the
three concurrent covariates used to control for system load: average
bed occupancy (percent), discharges, and admissions. The process
improvement program started at week 53.
"""

# (week, or_holds, occupancy, discharges, admissions)
CASE_STUDY_ROWS = (
    (1, 16, 65.5, 156, 212),
    (2, 17, 77.4, 156, 212),
    (3, 50, 85.8, 183, 232),
    (4, 50, 82.4, 164, 184),
    (5, 41, 85, 188, 200),
    (6, 44, 86.8, 172, 218),
    (7, 40, 86.7, 177, 201),
    (8, 28, 86.9, 173, 195),
    (9, 32, 85.9, 174, 210),
    (10, 19, 84.3, 199, 208),
    (11, 25, 86, 169, 215),
    (12, 19, 84.8, 179, 213),
    (13, 7, 80.5, 179, 186),
    (14, 26, 85.3, 179, 222),
    (15, 33, 88.6, 160, 197),
    (16, 55, 89.7, 188, 192),
    (17, 39, 89, 167, 194),
    (18, 70, 89.9, 162, 188),
    (19, 52, 91.8, 164, 173),
    (20, 23, 90, 164, 188),
    (21, 43, 87.9, 178, 195),
    (22, 27, 81, 180, 186),
    (23, 11, 80.5, 176, 194),
    (24, 48, 85.1, 158, 194),
    (25, 43, 90.2, 164, 207),
    (26, 41, 88.7, 186, 186),
    (27, 17, 87.9, 178, 190),
    (28, 19, 84.5, 183, 185),
    (29, 26, 87, 189, 207),
    (30, 28, 87.3, 175, 212),
    (31, 37, 88.8, 178, 197),
    (32, 11, 85.7, 158, 188),
    (33, 58, 84.6, 189, 203),
    (34, 16, 82.3, 182, 204),
    (35, 37, 84.7, 176, 212),
    (36, 24, 85.1, 176, 195),
    (37, 15, 81.1, 155, 178),
    (38, 40, 85.3, 174, 196),
    (39, 22, 87.6, 175, 209),
    (40, 39, 92, 148, 166),
    (41, 43, 88.3, 183, 204),
    (42, 58, 89.7, 158, 185),
    (43, 29, 85.9, 172, 186),
    (44, 32, 86.8, 162, 201),
    (45, 49, 88.7, 179, 199),
    (46, 38, 88, 177, 219),
    (47, 31, 88, 185, 212),
    (48, 10, 75, 141, 126),
    (49, 14, 82.7, 161, 198),
    (50, 33, 85.5, 168, 199),
    (51, 22, 87, 182, 197),
    (52, 12, 68.2, 184, 136),
    (53, 18, 62.8, 135, 189),
    (54, 14, 81.8, 169, 189),
    (55, 10, 85.7, 141, 153),
    (56, 14, 78.5, 173, 159),
    (57, 3, 79.7, 153, 176),
    (58, 15, 78.3, 144, 179),
    (59, 5, 81.4, 163, 189),
    (60, 25, 81.6, 164, 196),
    (61, 9, 83.9, 158, 183),
    (62, 23, 79.3, 170, 205),
    (63, 14, 84, 164, 182),
    (64, 27, 86, 182, 189),
    (65, 9, 85.9, 170, 171),
    (66, 11, 78.7, 145, 179),
    (67, 5, 81.5, 164, 186),
    (68, 19, 79.5, 163, 207),
    (69, 8, 83.4, 175, 190),
    (70, 5, 86.3, 172, 173),
    (71, 8, 82.3, 157, 184),
    (72, 7, 82.6, 163, 177),
    (73, 11, 78.8, 152, 181),
    (74, 11, 85.7, 139, 154),
    (75, 25, 81, 187, 188),
    (76, 15, 79.5, 156, 168),
    (77, 12, 76.7, 156, 182),
    (78, 25, 75.8, 167, 191),
    (79, 23, 73.9, 109, 134),
    (80, 20, 84.6, 164, 180),
    (81, 14, 82.7, 144, 163),
    (82, 7, 76.2, 165, 161),
    (83, 7, 73.3, 150, 179),
    (84, 7, 79.5, 157, 173),
    (85, 12, 83.3, 184, 178),
    (86, 9, 78.5, 165, 184),
    (87, 12, 79.7, 161, 195),
    (88, 4, 77.3, 150, 180),
    (89, 15, 83.8, 172, 204),
    (90, 11, 85.6, 166, 160),
    (91, 14, 84.4, 162, 184),
    (92, 14, 87.2, 164, 185),
    (93, 41, 85.7, 148, 175),
    (94, 12, 84.2, 167, 186),
    (95, 17, 84.1, 174, 193),
    (96, 26, 85.9, 164, 169),
    (97, 23, 85.8, 157, 176),
    (98, 18, 86.2, 174, 182),
    (99, 11, 79.2, 168, 151),
    (100, 22, 80.8, 150, 206),
    (101, 11, 85.7, 170, 190),
    (102, 31, 85.5, 178, 195),
    (103, 25, 84.1, 176, 190),
    (104, 4, 67, 125, 119),
    (105, 5, 71.7, 123, 151),
    (106, 13, 78.6, 174, 193),
    (107, 5, 73.6, 127, 166),
    (108, 17, 83.9, 171, 202),
    (109, 23, 84.7, 146, 165),
    (110, 12, 81.3, 162, 181),
    (111, 16, 82.8, 153, 170),
    (112, 18, 86.2, 160, 186),
    (113, 25, 81.6, 152, 183),
    (114, 23, 85.4, 141, 170),
)

OUTCOME_NAME = "or_holds"
COVARIATE_NAMES = ("occupancy", "discharges", "admissions")
INTERVENTION_WEEK = 53
