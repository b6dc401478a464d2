package main

import "fmt"

func work(sink chan int) {
	for {
		sink <- 1
	}
}

func fanIn(in1 chan int, in2 chan int, out chan int) {
	for {
		select {
		case v1 := <-in1:
			out <- v1
		case v2 := <-in2:
			out <- v2
		}
	}
}

func main() {
	input1 := make(chan int)
	input2 := make(chan int)
	merged := make(chan int)
	go work(input1)
	go work(input2)
	go fanIn(input1, input2, merged)
	for {
		msg := <-merged
		fmt.Println(msg)
	}
}
