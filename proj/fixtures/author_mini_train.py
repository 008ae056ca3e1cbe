#!/usr/bin/env python3
# Copyright 2026 The smes-lab Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes fixtures/mini_train.jsonl, the synthetic 12-dialogue training fixture.

The dialogues are hand-written. Client turns of odd-numbered dialogues carry a
video+audio clip pair; even-numbered dialogues are text-only. Every turn has
two first-pass annotations (a1, a2); the entries in DISAGREE list the turns
where a2 differs from the adjudicated label.
"""

import json
import sys
from pathlib import Path

C, T = "client", "therapist"

# (id, scenario, [(speaker, emotion, strategy|None, utterance)])
DIALOGUES = [
    ("d01", "work_stress", [
        (C, "depression", None, "I have not slept properly in weeks because of work."),
        (T, "neutral", "open_questions", "What keeps you awake when you lie down at night?"),
        (C, "anger", None, "My manager keeps piling deadlines on me and nobody helps."),
        (T, "neutral", "restatement", "So the pressure feels unfair and you carry it alone."),
        (C, "sadness", None, "Yes, and I feel like I am failing everyone."),
        (T, "neutral", "interpretation", "Maybe the fear of failing is louder than the actual work."),
        (C, "neutral", None, "I never thought of it that way before."),
        (T, "joy", "approval", "That is a good insight, you noticed it quickly."),
    ]),
    ("d02", "family_relationships", [
        (C, "anger", None, "My father called again and we argued for an hour."),
        (T, "neutral", "open_questions", "What did the argument start with this time?"),
        (C, "disgust", None, "He mocked my job in front of my sister."),
        (T, "sadness", "restatement", "You felt humiliated in front of someone you love."),
        (C, "depression", None, "I just want him to be proud of me once."),
        (T, "neutral", "interpretation", "It sounds like his approval still decides your worth."),
    ]),
    ("d03", "grief_and_loss", [
        (C, "sadness", None, "It has been a year since my mother died."),
        (T, "sadness", "approval", "Thank you for telling me, that takes courage."),
        (C, "depression", None, "Everyone says I should be over it by now."),
        (T, "neutral", "open_questions", "How do you feel when people say that to you?"),
        (C, "anger", None, "Angry, like they want my grief to disappear."),
        (T, "neutral", "restatement", "Their impatience makes you feel your grief is unwelcome."),
        (C, "sadness", None, "I still set two cups on the table sometimes."),
        (T, "sadness", "self_disclosure", "When I lost my brother I kept his coat for years."),
        (C, "neutral", None, "Maybe keeping small habits is not so strange."),
        (T, "neutral", "guiding_the_pace", "Let us stay with that memory a little longer."),
    ]),
    ("d04", "ptsd", [
        (C, "fear", None, "Loud noises make my heart race since the accident."),
        (T, "neutral", "open_questions", "What happens in your body when you hear them?"),
        (C, "fear", None, "I freeze and cannot breathe for a few seconds."),
        (T, "neutral", "advisement", "Try slow breathing, counting four in and six out."),
        (C, "neutral", None, "I can try that on the bus tomorrow."),
        (T, "joy", "approval", "Good, small practice in safe places helps a lot."),
        (C, "depression", None, "But I feel weak for needing tricks like this."),
        (T, "neutral", "interpretation", "Needing tools after trauma is a sign of effort, not weakness."),
    ]),
    ("d05", "dream_analysis", [
        (C, "fear", None, "I keep dreaming that I am falling from a bridge."),
        (T, "neutral", "open_questions", "What do you notice just before you fall?"),
        (C, "neutral", None, "Someone is calling my name but I cannot see them."),
        (T, "neutral", "interpretation", "Perhaps the voice is a part of you asking for attention."),
        (C, "sadness", None, "That part might be the child I used to be."),
        (T, "neutral", "structuring_the_therapy", "Next session we can draw the bridge and the voice together."),
    ]),
    ("d06", "childhood_shadow", [
        (C, "depression", None, "As a kid I was always the one blamed at home."),
        (T, "sadness", "restatement", "You grew up carrying blame that was not yours."),
        (C, "anger", None, "Even now I apologise for things I did not do."),
        (T, "neutral", "interpretation", "The old role follows you into new relationships."),
        (C, "sadness", None, "I do not know how to stop doing it."),
        (T, "neutral", "communication_skills", "Notice the apology forming, then pause before you say it."),
        (C, "neutral", None, "Pausing sounds simple but hard."),
        (T, "neutral", "advisement", "Start with one pause a day and write it down."),
    ]),
    ("d07", "therapeutic_relationship", [
        (C, "anger", None, "I do not think these sessions are helping me."),
        (T, "neutral", "open_questions", "What did you hope would change by now?"),
        (C, "disgust", None, "I hoped you would tell me what to do."),
        (T, "neutral", "structuring_the_therapy", "Our work is to find answers together, not to hand them over."),
        (C, "sadness", None, "That feels slow when I am hurting."),
        (T, "sadness", "restatement", "The pain makes waiting feel unbearable."),
        (C, "neutral", None, "Maybe I can give it a few more weeks."),
        (T, "joy", "approval", "I appreciate your honesty and your patience."),
        (C, "joy", None, "Thank you for not getting defensive."),
        (T, "neutral", "guiding_the_pace", "Let us slow down and see what today brings."),
    ]),
    ("d08", "romantic_relationships", [
        (C, "sadness", None, "My partner moved out last weekend."),
        (T, "sadness", "open_questions", "How are the evenings without them?"),
        (C, "depression", None, "Quiet, empty, I leave the television on all night."),
        (T, "neutral", "self_disclosure", "I also filled silence with noise after a breakup."),
        (C, "neutral", None, "Did it ever get easier for you?"),
        (T, "neutral", "others", "It did, slowly, but your path will be your own."),
    ]),
    ("d09", "self_esteem", [
        (C, "depression", None, "I look in the mirror and see nothing good."),
        (T, "neutral", "open_questions", "Whose voice tells you that nothing is good?"),
        (C, "sadness", None, "It sounds like my old teacher honestly."),
        (T, "neutral", "interpretation", "You may have adopted a critic who is no longer here."),
        (C, "anger", None, "I hate that she still has that power."),
        (T, "neutral", "communication_skills", "Answer that voice out loud with one fair sentence."),
        (C, "joy", None, "I actually did well on my exam last month."),
        (T, "joy", "approval", "That is a fair and true sentence, well done."),
    ]),
    ("d10", "anxiety", [
        (C, "fear", None, "I panic before every meeting at the office."),
        (T, "neutral", "open_questions", "What do you predict will happen in the meeting?"),
        (C, "fear", None, "That I will say something stupid and be fired."),
        (T, "neutral", "restatement", "One mistake feels like it could cost you everything."),
        (C, "neutral", None, "When you say it like that it sounds extreme."),
        (T, "neutral", "advisement", "Write the worst case and the likely case before meetings."),
    ]),
    ("d11", "social_isolation", [
        (C, "sadness", None, "I moved cities and I have not made one friend."),
        (T, "sadness", "restatement", "Starting over has left you feeling very alone."),
        (C, "depression", None, "Weekends are the worst, I barely leave the flat."),
        (T, "neutral", "open_questions", "What used to bring you joy on weekends back home?"),
        (C, "joy", None, "Playing football with my cousins in the park."),
        (T, "neutral", "advisement", "Look for a local amateur team this week."),
        (C, "fear", None, "What if they do not want me there?"),
        (T, "neutral", "guiding_the_pace", "Let us take that fear one step at a time."),
    ]),
    ("d12", "illness_and_health", [
        (C, "fear", None, "The doctor found a lump and I wait for results."),
        (T, "neutral", "open_questions", "How are you coping with the waiting?"),
        (C, "anger", None, "Badly, I snap at everyone around me."),
        (T, "neutral", "interpretation", "The anger may be fear wearing a louder coat."),
        (C, "sadness", None, "I am scared to tell my children."),
        (T, "sadness", "approval", "Wanting to protect them shows how much you care."),
        (C, "neutral", None, "Maybe I will tell them once I know more."),
        (T, "neutral", "structuring_the_therapy", "We can plan that conversation in our next session."),
        (C, "depression", None, "I hope I get the chance to have it."),
        (T, "sadness", "others", "Whatever the results, you will not face them alone."),
    ]),
]

# (dialogue id, turn index) -> (a2 emotion, a2 strategy or None)
DISAGREE = {
    ("d01", 3): ("disgust", None),
    ("d02", 4): ("neutral", "restatement"),
    ("d03", 8): ("sadness", "approval"),
    ("d04", 7): ("sadness", None),
    ("d06", 6): ("neutral", "advisement"),
    ("d07", 5): ("depression", None),
    ("d09", 2): ("neutral", "interpretation"),
    ("d10", 1): ("anger", None),
    ("d11", 6): ("neutral", "open_questions"),
    ("d12", 4): ("anger", "interpretation"),
}


def clips_for(dialogue_number, turn_index):
    media = "s1e%02d" % dialogue_number
    start = 4.0 * (turn_index - 1) + 0.5
    end = start + 3.5
    return [
        {"end_s": end, "kind": "video", "media_id": media, "start_s": start},
        {"end_s": end, "kind": "audio", "media_id": media, "start_s": start},
    ]


def build():
    lines = ["#mesc-schema:1", "#split:train"]
    for n, (did, scenario, turns) in enumerate(DIALOGUES, start=1):
        out_turns = []
        for i, (speaker, emotion, strategy, utt) in enumerate(turns, start=1):
            turn = {"index": i, "speaker": speaker, "utterance": utt, "emotion": emotion}
            if strategy is not None:
                turn["strategy"] = strategy
            turn["clips"] = clips_for(n, i) if (n % 2 == 1 and speaker == C) else []
            a1 = {"emotion": emotion}
            if strategy is not None:
                a1["strategy"] = strategy
            a2 = dict(a1)
            if (did, i) in DISAGREE:
                e2, s2 = DISAGREE[(did, i)]
                a2["emotion"] = e2
                if s2 is not None:
                    a2["strategy"] = s2
            turn["raw_annotations"] = {"a1": a1, "a2": a2}
            out_turns.append(turn)
        record = {"id": did, "scenario": scenario, "turns": out_turns}
        lines.append(json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False))
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).with_name("mini_train.jsonl")
    target.write_text(build(), encoding="utf-8")
