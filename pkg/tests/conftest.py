from smoothonline.engine import Adversary, Learner


class Scripted(Adversary):
    """Fixed inputs and labels."""
    name = "scripted"

    def __init__(self, inputs, labels, class_info=None):
        self.inputs, self.labels = list(inputs), list(labels)
        self.class_info = class_info

    def next_input(self, t):
        return self.inputs[t] if t < len(self.inputs) else None

    def reveal(self, t, x, y_hat):
        return self.labels[t]


class Constant(Learner):
    name = "constant"

    def __init__(self, value=0.0):
        self.value = value

    def predict(self, state, x):
        return self.value
